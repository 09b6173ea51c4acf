#include "doctest.h"

#include "romanov/errors.hpp"
#include "romanov/quadratic.hpp"

#include <cmath>
#include <random>

using namespace romanov;

TEST_CASE("rational parsing and ordering") {
    CHECK(parse_rational("1/3") == Rational(1, 3));
    CHECK(parse_rational("2/6") == Rational(1, 3));
    CHECK(parse_rational("-4/-8") == Rational(1, 2));
    CHECK(parse_rational("7") == Rational(7, 1));
    CHECK(Rational(1, 6) < Rational(1, 5));
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("x"), DomainError);
}

TEST_CASE("exact helpers") {
    CHECK(exact::floor_div(-7, 2) == -4);
    CHECK(exact::floor_div(7, -2) == -4);
    CHECK(exact::floor_div(6, 3) == 2);
    CHECK(exact::sign(-3, 2, 2) == -1);  // -3 + 2.83
    CHECK(exact::sign(-2, 2, 2) == 1);
    CHECK(exact::sign(3, -2, 2) == 1);
    CHECK(exact::floor_sqrt_multiple(1, 2) == 1);
    CHECK(exact::floor_sqrt_multiple(-1, 2) == -2);
    CHECK(exact::floor_sqrt_multiple(3, 4) == 6);
    const i128 huge = static_cast<i128>(1) << 100;
    CHECK_THROWS_AS(exact::mul(huge, huge), PrecisionError);
}

TEST_CASE("quadratic irrational parsing and normalization") {
    CHECK_THROWS_AS(QuadraticIrrational::sqrt(4), DomainError);
    CHECK_THROWS_AS(parse_quadratic("sqrt:4"), DomainError);
    CHECK_THROWS_AS(parse_quadratic("sqrt:-2"), DomainError);
    CHECK_THROWS_AS(parse_quadratic("pi"), DomainError);
    const auto g = parse_quadratic("golden");
    CHECK(g == QuadraticIrrational::golden());
    CHECK(g.to_double() == doctest::Approx((1 + std::sqrt(5.0)) / 2));
    const auto q = parse_quadratic("quad:1,3,3");  // Q does not divide D - P^2 = 2
    CHECK((static_cast<i64>(q.D()) - q.P() * q.P()) % q.Q() == 0);
    CHECK(q.to_double() == doctest::Approx((1 + std::sqrt(3.0)) / 3));
}

TEST_CASE("continued fractions") {
    const auto s2 = cf_expand(QuadraticIrrational::sqrt(2), 5);
    CHECK(s2.partial_quotients == std::vector<i64>{1, 2, 2, 2, 2});
    CHECK(s2.convergents == std::vector<Convergent>{{1, 1}, {3, 2}, {7, 5}, {17, 12}, {41, 29}});
    for (const auto& c : s2.convergents) {
        const i64 pell = c.p * c.p - 2 * c.q * c.q;
        CHECK((pell == 1 || pell == -1));
    }
    CHECK(cf_expand(QuadraticIrrational::golden(), 4).partial_quotients == std::vector<i64>{1, 1, 1, 1});
    CHECK(cf_expand(QuadraticIrrational::sqrt(7), 5).partial_quotients == std::vector<i64>{2, 1, 1, 1, 4});
    CHECK(cf_expand(parse_quadratic("quad:1,3,3"), 6).partial_quotients == std::vector<i64>{0, 1, 10, 5, 10, 5});
    CHECK_THROWS_AS(cf_expand(QuadraticIrrational::sqrt(2), 0), DomainError);
    CHECK_THROWS_AS(cf_expand(QuadraticIrrational::sqrt(2), 200), PrecisionError);
}

TEST_CASE("convergent identities for many radicands") {
    for (u64 D = 2; D < 200; ++D) {
        const u64 r = isqrt(D);
        if (r * r == D) continue;
        const auto cf = cf_expand_until(QuadraticIrrational::sqrt(D), 1'000'000'000ull);
        for (std::size_t n = 1; n < cf.convergents.size(); ++n) {
            const auto& c = cf.convergents[n];
            const auto& b = cf.convergents[n - 1];
            const i128 det = static_cast<i128>(c.p) * b.q - static_cast<i128>(b.p) * c.q;
            CHECK(det == (n % 2 == 1 ? 1 : -1));
            if (n >= 2) CHECK(c.q > b.q);
            CHECK(gcd(static_cast<u64>(c.p), static_cast<u64>(c.q)) == 1);
            if (n >= 2) CHECK(c.q == cf.partial_quotients[n] * b.q + cf.convergents[n - 2].q);
        }
    }
}

TEST_CASE("nearest integer distance") {
    const auto s2 = QuadraticIrrational::sqrt(2);
    CHECK(nearest_int_dist(s2, 1).distance.to_double() == doctest::Approx(std::sqrt(2.0) - 1));
    CHECK(nearest_int_dist(s2, 1).nearest == 1);
    CHECK(nearest_int_dist(s2, 5).distance.to_double() == doctest::Approx(0.07107).epsilon(1e-4));
    CHECK(nearest_int_dist(s2, 5).nearest == 7);
    CHECK(nearest_int_dist(QuadraticIrrational::golden(), 1).distance.to_double() ==
          doctest::Approx(0.38197).epsilon(1e-4));
    CHECK_THROWS_AS(nearest_int_dist(s2, 0), DomainError);

    // exact value compared against an integer-only oracle: ||q sqrt2|| < 1/2 decides nearest
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const u64 q = 1 + rng() % 1'000'000'000ull;
        const u128 fl = exact::isqrt(static_cast<u128>(2) * q * q);
        // nearest is fl or fl + 1: compare (fl + 1/2)^2 with 2q^2 via 4x
        const u128 lhs = (2 * fl + 1) * (2 * fl + 1);
        const u128 rhs = static_cast<u128>(8) * q * q;
        const u128 expect = lhs > rhs ? fl : fl + 1;
        CHECK(nearest_int_dist(s2, q).nearest == static_cast<i128>(expect));
    }
}

TEST_CASE("surd comparisons across different representations") {
    const QuadSurd a(1, 1, 1, 2);   // 1 + sqrt2
    const QuadSurd b(2, 2, 2, 2);   // same value
    const QuadSurd c(3, -2, 1, 2);  // 3 - 2 sqrt2 > 0
    CHECK(a == b);
    CHECK(c > QuadSurd(0, 0, 1, 2));
    CHECK(c < QuadSurd(1, 0, 5, 2));
    CHECK((c <=> Rational(1, 6)) > 0);
    CHECK((c <=> Rational(1, 5)) < 0);
}
