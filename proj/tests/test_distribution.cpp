#include "doctest.h"

#include "romanov/distribution.hpp"
#include "romanov/errors.hpp"
#include "romanov/reference.hpp"

#include <cmath>
#include <random>

using namespace romanov;

namespace {
u64 count_A_by_enumeration(u64 x, u64 q, u64 a) {
    u64 c = 0;
    for (u64 n = x; n < 2 * x; ++n) c += n % q == a % q;
    return c;
}
} // namespace

TEST_CASE("count_A") {
    CHECK(count_A(10, 1, 0) == 10);
    CHECK(count_A(10, 2, 0) == 5);
    CHECK(count_A(10, 3, 1) == 4);
    CHECK(count_A(0, 3, 1) == 0);
    CHECK_THROWS_AS(count_A(10, 0, 0), DomainError);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 2000; ++i) {
        const u64 x = 1 + rng() % 500, q = 1 + rng() % 60, a = rng() % 200;
        REQUIRE(count_A(x, q, a) == count_A_by_enumeration(x, q, a));
    }
    for (u64 q = 1; q < 40; ++q) {
        u64 total = 0;
        for (u64 a = 0; a < q; ++a) total += count_A(1234, q, a);
        CHECK(total == 1234);
    }
}

TEST_CASE("count_P_LA") {
    const LinearFunction id(1, 0), odd(2, 1);
    CHECK(count_P_LA(10, id, 1, 0) == 4);
    CHECK(count_P_LA(5, odd, 1, 0) == 4);
    CHECK(count_P_LA(10, id, 2, 0) == 0);
    for (const auto& fn : {id, odd, LinearFunction(6, 5), LinearFunction(3, 1)})
        for (u64 q : {1ull, 2ull, 5ull, 12ull, 29ull}) {
            u64 total = 0;
            for (u64 a = 0; a < q; ++a) total += count_P_LA(5000, fn, q, a);
            CHECK(total == count_P_LA(5000, fn, 1, 0));
        }
    CHECK_THROWS_AS(count_P_LA(1ull << 30, LinearFunction(1ull << 33, 1), 1, 0), OverflowError);
}

TEST_CASE("phi_L") {
    CHECK(phi_L(LinearFunction(1, 0), 12) == Rational(4, 1));
    CHECK(phi_L(LinearFunction(7, 3), 1) == Rational(1, 1));
    CHECK(phi_L(LinearFunction(2, 1), 3) == Rational(2, 1));
    CHECK(phi_L(LinearFunction(2, 1), 2) == Rational(2, 1));
    CHECK(phi_L(LinearFunction(6, 1), 4) == Rational(4, 1));
    for (u64 u = 1; u < 30; ++u)
        for (u64 q = 1; q < 60; ++q) {
            const LinearFunction fn(u, 1);
            if (gcd(q, u) == 1) CHECK(phi_L(fn, q) == Rational(static_cast<i64>(euler_phi(q)), 1));
        }
}

TEST_CASE("max_modulus") {
    CHECK(max_modulus(100, {1, 3}) == 4);
    CHECK(max_modulus(1000, {1, 3}) == 10);
    CHECK(max_modulus(999, {1, 3}) == 9);
    CHECK(max_modulus(1000000, {1, 3}) == 100);
    CHECK(max_modulus(1000000, {1, 2}) == 1000);
    CHECK(max_modulus(1000001, {1, 2}) == 1000);
    CHECK(max_modulus(8, {2, 3}) == 4);
    CHECK(max_modulus(1ull << 62, {1, 2}) == 1ull << 31);
    CHECK_THROWS_AS(max_modulus(100, {1, 1}), DomainError);
    CHECK_THROWS_AS(max_modulus(100, {0, 1}), DomainError);
}

TEST_CASE("hyp1 over the integers") {
    const std::vector<LinearFunction> fns{{1, 0}};
    const auto r = hyp1_evaluate(100, {1, 3}, fns);
    CHECK(r.q_max == 4);
    CHECK(r.cond1 <= 4);
    for (double t : r.cond1_terms) CHECK(t < 1);
    CHECK(r.cond3 <= 2);
    REQUIRE(r.per_function.size() == 1);
    CHECK(r.per_function[0].P_LA_total == count_P_LA(100, fns[0], 1, 0));

    for (u64 x : {10000ull, 123457ull}) {
        const std::vector<LinearFunction> two{{1, 0}, {2, 1}};
        const auto a = hyp1_evaluate(x, {1, 3}, two, 6);
        const auto b = reference::hyp1_evaluate(x, {1, 3}, two, 6);
        CHECK(a.q_max == b.q_max);
        CHECK(a.cond1 == doctest::Approx(b.cond1).epsilon(1e-12));
        CHECK(a.cond3 == doctest::Approx(b.cond3).epsilon(1e-12));
        for (std::size_t i = 0; i < two.size(); ++i) {
            CHECK(a.per_function[i].P_LA_total == b.per_function[i].P_LA_total);
            CHECK(a.per_function[i].cond2 == doctest::Approx(b.per_function[i].cond2).epsilon(1e-9));
        }
        for (double t : a.cond1_terms) CHECK(t < 1);
    }

    const auto m = hyp1_evaluate(1000000, {1, 3}, fns);
    CHECK(m.per_function[0].P_LA_total == 70435);
    CHECK(std::isfinite(m.per_function[0].cond2));
    CHECK(m.per_function[0].cond2_reference >= 0.0);

    CHECK_THROWS_AS(hyp1_evaluate(1ull << 33, {2, 3}, fns), CapacityError);
    CHECK_THROWS_AS(hyp1_evaluate(100, {1, 3}, fns, 0), DomainError);
}

TEST_CASE("window counts") {
    const auto r = window_counts(1, 1, 5, 2, 1);
    CHECK(r.counts == std::vector<u64>{1, 1, 0, 0, 1});
    CHECK(r.threshold_hits == 3);
    CHECK(r.histogram.at(0) == 2);
    CHECK(r.histogram.at(1) == 3);

    const auto zero = window_counts(7, 3, 100, 0, 1);
    CHECK(zero.histogram.size() == 1);
    CHECK(zero.histogram.at(0) == 100);
    CHECK(zero.threshold_hits == 0);

    const u64 thr = static_cast<u64>(std::ceil(std::log(100.0)));
    const auto big = window_counts(3, 1, 10000, 100, thr);
    CHECK(big.threshold_hits >= 1);
    u64 freq = 0, hits = 0;
    for (const auto& [c, f] : big.histogram) {
        freq += f;
        if (c >= thr) hits += f;
    }
    CHECK(freq == 10000);
    CHECK(hits == big.threshold_hits);
    CHECK(big.counts == reference::window_counts(3, 1, 10000, 100));

    CHECK_THROWS_AS(window_counts(4, 2, 10, 5, 1), DomainError);
    CHECK_THROWS_AS(window_counts(4, 0, 10, 5, 1), DomainError);
    CHECK_THROWS_AS(window_counts(4, 5, 10, 5, 1), DomainError);
    CHECK_THROWS_AS(window_counts(4, 1, 0, 5, 1), DomainError);
}

TEST_CASE("exchange identity") {
    const auto small = window_identity_check(1, 1, 5, 2);
    CHECK(small.by_window == 3);
    CHECK(small.by_prime == 3);
    const auto empty = window_identity_check(5, 2, 100, 0);
    CHECK(empty.by_window == 0);
    CHECK(empty.by_prime == 0);
    CHECK(window_identity_check(3, 1, 1000, 50).holds());

    std::mt19937_64 rng(77);
    for (int i = 0; i < 50; ++i) {
        const u64 q = 1 + rng() % 10;
        u64 a;
        do a = 1 + rng() % q;
        while (gcd(a, q) != 1);
        const u64 x = 1 + rng() % 10000, y = rng() % 201;
        const auto id = window_identity_check(q, a, x, y);
        CHECK_MESSAGE(id.holds(), "q=" << q << " a=" << a << " x=" << x << " y=" << y);
        u64 sum = 0;
        for (u64 c : window_counts(q, a, x, y, 0).counts) sum += c;
        CHECK(sum == id.by_window);
    }
}
