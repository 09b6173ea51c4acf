#include "doctest.h"

#include "romanov/errors.hpp"
#include "romanov/primes.hpp"
#include "romanov/reference.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace romanov;

namespace {
bool trial_division(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
} // namespace

TEST_CASE("is_prime small cases") {
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(0));
    CHECK(is_prime(103));
    CHECK_FALSE(is_prime(561));  // Carmichael
    CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to 2, 3, 5, 7
    CHECK(is_prime(2305843009213693951ull));  // 2^61 - 1
    CHECK_FALSE(is_prime(3825123056546413051ull));
    CHECK(is_prime(18446744073709551557ull));  // largest 64-bit prime
}

TEST_CASE("is_prime agrees with trial division on random n < 10^9") {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<u64> dist(0, 1'000'000'000 - 1);
    for (int i = 0; i < 10000; ++i) {
        const u64 n = dist(rng);
        REQUIRE_MESSAGE(is_prime(n) == trial_division(n), "n = " << n);
    }
}

TEST_CASE("prime table flags") {
    const auto t = PrimeTable::build(0, 10);
    std::vector<u64> got;
    t.for_each_prime(0, 10, [&](u64 p) { got.push_back(p); });
    CHECK(got == std::vector<u64>{2, 3, 5, 7});
    for (u64 n = 0; n < 10; ++n) CHECK(t.is_prime(n) == trial_division(n));

    const auto empty = PrimeTable::build(0, 0);
    CHECK(empty.count() == 0);
    CHECK_THROWS_AS((void)empty.is_prime(0), std::out_of_range);

    const auto mid = PrimeTable::build(1'000'000, 1'000'100);
    for (u64 n = 1'000'000; n < 1'000'100; ++n) CHECK(mid.is_prime(n) == trial_division(n));
    CHECK_THROWS_AS((void)mid.is_prime(999'999), std::out_of_range);
    CHECK_THROWS_AS((void)mid.is_prime(1'000'100), std::out_of_range);
}

TEST_CASE("prime table over several segments matches the plain sieve") {
    const u64 hi = 3 * kSegmentSpan + 12345;
    const auto t = PrimeTable::build(0, hi);
    const auto ref = reference::sieve(hi);
    u64 count = 0;
    for (u64 n = 0; n < hi; ++n) {
        if (t.test(n) != ref[n]) FAIL("mismatch at " << n);
        count += ref[n];
    }
    CHECK(t.count() == count);
}

TEST_CASE("segmented consistency at arbitrary split points") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const u64 lo = rng() % 5'000'000;
        const u64 hi = lo + 1 + rng() % 2'500'000;
        const u64 s = lo + rng() % (hi - lo);
        const auto whole = PrimeTable::build(lo, hi);
        const auto left = PrimeTable::build(lo, s);
        const auto right = PrimeTable::build(s, hi);
        for (u64 n = lo; n < hi; n += 1 + rng() % 7) {
            const bool w = whole.is_prime(n);
            const bool parts = n < s ? left.is_prime(n) : right.is_prime(n);
            REQUIRE_MESSAGE(w == parts, "lo=" << lo << " s=" << s << " hi=" << hi << " n=" << n);
        }
        CHECK(whole.count() == left.count() + right.count());
    }
}

TEST_CASE("prime table capacity") {
    CHECK_THROWS_AS(PrimeTable::build(0, 1ull << 40, 1 << 20), CapacityError);
    CHECK_THROWS_AS(PrimeTable::build(10, 5), DomainError);
}

TEST_CASE("cache round trip and corruption") {
    const auto t = PrimeTable::build(12345, 987654);
    std::stringstream buf;
    t.write(buf);
    const std::string bytes = buf.str();
    std::istringstream in(bytes);
    CHECK(PrimeTable::read(in) == t);

    std::string bad = bytes;
    bad[0] = 'X';
    std::istringstream in_bad(bad);
    CHECK_THROWS_AS(PrimeTable::read(in_bad), FormatError);

    std::istringstream in_short(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(PrimeTable::read(in_short), FormatError);
}

TEST_CASE("count_primes") {
    CHECK(count_primes(100).count == 25);
    CHECK(count_primes(1).count == 0);
    CHECK(count_primes(100, 4, 1).count == 11);
    CHECK(count_primes(10'000'000).count == 664579);
    CHECK_THROWS_AS(count_primes(10, 0, 0), DomainError);
    CHECK_THROWS_AS(count_primes(10, 4, 4), DomainError);
}

TEST_CASE("residue classes partition the prime count") {
    for (u64 x : {1000ull, 65536ull, 1'234'567ull})
        for (u64 q : {1ull, 2ull, 3ull, 10ull, 30ull, 97ull}) {
            u64 total = 0;
            for (u64 a = 0; a < q; ++a) {
                const u64 c = count_primes(x, q, a).count;
                if (x < 70000) CHECK(c == reference::count_primes(x, q, a));
                total += c;
            }
            CHECK(total == count_primes(x).count);
        }
}

TEST_CASE("von Mangoldt and Chebyshev functions") {
    CHECK(von_mangoldt(6) == 0.0);
    CHECK(von_mangoldt(8) == doctest::Approx(std::log(2.0)));
    CHECK(von_mangoldt(7) == doctest::Approx(1.945910).epsilon(1e-6));
    CHECK(von_mangoldt(1) == 0.0);
    CHECK(chebyshev_psi(10) == doctest::Approx(7.832015).epsilon(1e-6));
    CHECK(chebyshev_psi(1) == 0.0);
    CHECK(chebyshev_psi(20, 2, 1) == doctest::Approx(reference::chebyshev_psi(20, 2, 1)));
    for (u64 x : {100ull, 10000ull, 200000ull}) {
        const double psi = chebyshev_psi(x);
        CHECK(psi >= chebyshev_theta(x));
        CHECK(static_cast<double>(count_primes(x).count) * std::log(2.0) <= psi * 1.01);
        CHECK(psi == doctest::Approx(reference::chebyshev_psi(x)).epsilon(1e-12));
    }
}

TEST_CASE("psi at 10^7 within the absolute error budget") {
    const u64 x = 10'000'000;
    long double direct = 0.0L;
    const auto t = PrimeTable::build(0, x + 1);
    t.for_each_prime(0, x + 1, [&](u64 p) {
        const long double lp = std::log(static_cast<long double>(p));
        for (u64 pk = p; pk <= x; pk *= p) {
            direct += lp;
            if (pk > x / p) break;
        }
    });
    CHECK(std::abs(static_cast<long double>(chebyshev_psi(x)) - direct) <= 1e-6L);
}

TEST_CASE("totient, largest prime factor, inverse") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(13) == 12);
    CHECK(euler_phi(12) == 4);
    CHECK(largest_prime_factor(2) == 2);
    CHECK(largest_prime_factor(12) == 3);
    CHECK(largest_prime_factor(241) == 241);
    CHECK(largest_prime_factor(600851475143ull) == 6857);
    CHECK_THROWS_AS(largest_prime_factor(1), DomainError);
    CHECK(mod_inverse(1, 7) == 1);
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(-3, 7) == 2);
    CHECK_THROWS_AS(mod_inverse(2, 4), NoInverseError);
}

TEST_CASE("factorize on random 62-bit numbers") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const u64 n = 2 + rng() % ((1ull << 62) - 2);
        u64 back = 1;
        u64 prev = 0;
        for (auto [p, e] : factorize(n)) {
            CHECK(is_prime(p));
            CHECK(p > prev);
            prev = p;
            for (int k = 0; k < e; ++k) back *= p;
        }
        CHECK(back == n);
    }
}

TEST_CASE("crt_combine") {
    CHECK(crt_combine(std::vector<Congruence>{{0, 1}}) == Congruence{0, 1});
    CHECK(crt_combine(std::vector<Congruence>{{1, 2}, {2, 3}}) == Congruence{5, 6});
    CHECK(crt_combine(std::vector<Congruence>{{0, 2}, {0, 3}}) == Congruence{0, 6});
    CHECK_THROWS_AS(crt_combine(std::vector<Congruence>{{1, 4}, {1, 6}}), DomainError);
    CHECK_THROWS_AS(crt_combine(std::vector<Congruence>{{0, 1ull << 40}, {0, (1ull << 40) - 1}}), OverflowError);

    std::mt19937_64 rng(3);
    const auto small = primes_up_to(200);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Congruence> parts;
        u64 mod = 1;
        for (u64 p : small) {
            if (rng() % 3 != 0) continue;
            const u64 m = p * (rng() % 2 ? p : 1);
            if (static_cast<u128>(mod) * m >= (1ull << 62)) break;
            mod *= m;
            parts.push_back({rng() % m, m});
        }
        if (parts.empty()) continue;
        const auto c = crt_combine(parts);
        CHECK(c.modulus == mod);
        for (const auto& pc : parts) CHECK(c.residue % pc.modulus == pc.residue);
    }
}
