#include "doctest.h"

#include "romanov/admissible.hpp"
#include "romanov/errors.hpp"
#include "romanov/reference.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace romanov;

namespace {

std::vector<LinearFunction> shifts(std::initializer_list<u64> vs) {
    std::vector<LinearFunction> out;
    for (u64 v : vs) out.emplace_back(1, v);
    return out;
}

// p does not divide prod(u_i m + v_i)
bool witness_ok(std::span<const LinearFunction> fns, u64 p, u64 m) {
    for (const auto& f : fns)
        if ((static_cast<u128>(f.u()) * m + f.v()) % p == 0) return false;
    return true;
}

std::vector<LinearFunction> random_family(std::mt19937_64& rng, std::size_t s, u64 u_max, u64 v_max) {
    std::set<LinearFunction> seen;
    std::vector<LinearFunction> out;
    while (out.size() < s) {
        const u64 u = 1 + rng() % u_max;
        const u64 v = rng() % (v_max + 1);
        if (gcd(u, v) != 1) continue;
        LinearFunction f(u, v);
        if (seen.insert(f).second) out.push_back(f);
    }
    return out;
}

} // namespace

TEST_CASE("linear function validation") {
    CHECK_THROWS_AS(LinearFunction(0, 1), DomainError);
    CHECK_THROWS_AS(LinearFunction(2, 4), DomainError);
    CHECK_NOTHROW(LinearFunction(1, 0));
    CHECK_THROWS_AS(LinearFunction(2, 0), DomainError);
    CHECK(LinearFunction(3, 2)(5) == 17);
    CHECK_THROWS_AS(LinearFunction(1ull << 32, 1)(1ull << 32), OverflowError);

    std::istringstream in("1 0\n# c\n2 1\n");
    CHECK(load_functions(in).size() == 2);
    std::istringstream bad("1 0\n4 2\n");
    try {
        (void)load_functions(bad);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("is_admissible examples") {
    const auto twin = shifts({0, 2});
    const auto r = is_admissible(twin);
    CHECK(r.admissible);
    REQUIRE_FALSE(r.certificate.witnesses.empty());
    CHECK(r.certificate.witnesses[0] == PrimeWitness{2, 1});
    CHECK(certificate_holds(twin, r.certificate));

    const auto consecutive = is_admissible(shifts({0, 1}));
    CHECK_FALSE(consecutive.admissible);
    CHECK(consecutive.failing_prime == 2);

    const auto triple = is_admissible(shifts({0, 2, 4}));
    CHECK_FALSE(triple.admissible);
    CHECK(triple.failing_prime == 3);

    CHECK(is_admissible(shifts({0, 2, 6})).admissible);
    CHECK_THROWS_AS(is_admissible(std::vector<LinearFunction>{}), DomainError);
    CHECK_THROWS_AS(is_admissible(shifts({0, 0})), DomainError);
}

TEST_CASE("certificates re-verify and cover every small prime") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto fns = random_family(rng, 1 + rng() % 12, 5, 60);
        const auto r = is_admissible(fns);
        if (!r.admissible) {
            REQUIRE(r.failing_prime);
            CHECK_FALSE(witness_for_prime(fns, *r.failing_prime));
            continue;
        }
        CHECK(certificate_holds(fns, r.certificate));
        CHECK(r.certificate.covers_up_to >= fns.size());
        std::set<u64> listed;
        for (const auto& w : r.certificate.witnesses) {
            CHECK(witness_ok(fns, w.p, w.m));
            listed.insert(w.p);
        }
        for (u64 p : primes_up_to(fns.size())) CHECK(listed.count(p) == 1);
        for (const auto& w : r.certificate.spot_checks) CHECK(witness_ok(fns, w.p, w.m));
    }
}

TEST_CASE("witnesses exist for sampled primes above k") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto fns = random_family(rng, 2 + rng() % 20, 7, 1000);
        const u64 k = fns.size();
        for (u64 p : primes_up_to(10 * k)) {
            if (p <= k) continue;
            const auto m = witness_for_prime(fns, p);
            REQUIRE(m);
            CHECK(witness_ok(fns, p, *m));
        }
    }
}

TEST_CASE("tampered certificate is rejected") {
    const auto fns = shifts({0, 2, 6});
    auto r = is_admissible(fns);
    REQUIRE(r.admissible);
    r.certificate.witnesses[0].m = 0;  // 0 * ... divisible by 2
    CHECK_FALSE(certificate_holds(fns, r.certificate));
}

TEST_CASE("cd1 bound recurrence") {
    const auto t = cd1_bound_recurrence(5);
    CHECK(t.bound_sequence == std::vector<u64>{5, 3, 2});
    CHECK(t.bound_prime == 3);
    CHECK(t.s_t() == 2);
    const auto big = cd1_bound_recurrence(100);
    const auto ps = primes_up_to(1000);
    for (std::size_t j = 1; j < big.bound_sequence.size(); ++j)
        CHECK(big.bound_sequence[j] == big.bound_sequence[j - 1] - big.bound_sequence[j - 1] / ps[j - 1]);
}

TEST_CASE("cd1 hand trace on five consecutive shifts") {
    const auto fns = shifts({0, 1, 2, 3, 4});
    const auto r = cd1_extract(fns);
    CHECK(r.survivors == std::vector<std::size_t>{2, 4});
    REQUIRE(r.trace.steps.size() == 2);
    CHECK(r.trace.steps[0].p == 2);
    CHECK(r.trace.steps[0].dropped_count == 2);
    CHECK(r.trace.steps[1].p == 3);
    CHECK(r.trace.steps[1].dropped_count == 1);
    CHECK(r.trace.steps[1].kept_count == 2);
    CHECK(r.trace.s_t() == 2);
    CHECK(r.trace.bound_prime == 3);
    CHECK_THROWS_AS(cd1_extract(shifts({0, 1, 2, 3})), DomainError);
}

TEST_CASE("cd1 random instances") {
    std::mt19937_64 rng(2024);
    const auto ps = primes_up_to(10000);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t s = 5 + rng() % 300;
        const auto fns = random_family(rng, s, trial % 2 ? 3 : 50, 1'000'000);
        const auto r = cd1_extract(fns);
        std::vector<LinearFunction> kept;
        for (std::size_t i : r.survivors) kept.push_back(fns[i]);
        CHECK(std::is_sorted(r.survivors.begin(), r.survivors.end()));
        CHECK(std::adjacent_find(r.survivors.begin(), r.survivors.end()) == r.survivors.end());
        CHECK(r.survivors.back() < s);
        CHECK(is_admissible(kept).admissible);
        CHECK(certificate_holds(kept, r.certificate));

        const auto& tr = r.trace;
        CHECK(kept.size() >= tr.s_t());
        CHECK(tr.s_t() + 1 >= tr.bound_prime);
        for (std::size_t j = 0; j < tr.steps.size(); ++j) CHECK(tr.steps[j].kept_count >= tr.bound_at(j + 1));

        // s_t >= s * prod_{j <= t} (1 - 1/p_j), exactly
        u128 num = tr.s_t(), den = s;
        for (std::size_t j = 0; j + 1 < tr.bound_sequence.size(); ++j) {
            num *= ps[j];
            den *= ps[j] - 1;
        }
        CHECK(num >= den);
    }
}

TEST_CASE("shifted system") {
    const SequencePair seq({1, 3}, {2, 1});
    const auto sys = shifted_system(seq, 1e30, 0.2);
    REQUIRE(sys.k >= 2);
    CHECK(sys.funcs == std::vector<LinearFunction>{{2, 5}, {1, 0}});
    CHECK_THROWS_AS(shifted_system(seq, 1e30, 0.3), DomainError);

    const auto e = shifted_system(seq, std::exp(std::exp(1.0)), 0.2);
    CHECK(static_cast<double>(e.k) <= e.k_real);
    CHECK(e.k_real < static_cast<double>(e.k) + 1);
    CHECK(e.k_real == doctest::Approx(0.9 * std::pow(0.2, 0.2) * std::pow(e.log_X, 0.2)));
}

TEST_CASE("cluster counts and scans") {
    CHECK(cluster_count(shifts({0, 2}), 5) == 2);
    CHECK(cluster_count(shifts({0, 1}), 1) == 1);
    CHECK(cluster_count(std::vector<LinearFunction>{{2, 1}}, 0) == 0);

    const auto trio = cluster_scan(shifts({0, 2, 6}), 5, 3);
    CHECK(trio.count == 1);
    CHECK(trio.witnesses == std::vector<u64>{5});
    CHECK(cluster_scan(shifts({0, 1}), 1000, 2).count == 0);
    CHECK(cluster_scan(shifts({0, 1}), 3, 2).count == 0);
    CHECK(cluster_scan(shifts({0, 2}), 777, 0).count == 777);

    const auto fns = shifts({0, 2, 6, 8});
    for (u64 x : {100ull, 70000ull, 200001ull}) {
        const auto a = cluster_scan(fns, x, 3, 50);
        const auto b = reference::cluster_scan(fns, x, 3, 50);
        CHECK(a.count == b.count);
        CHECK(a.witnesses == b.witnesses);
    }
}
