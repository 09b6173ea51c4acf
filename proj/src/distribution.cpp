#include "romanov/distribution.hpp"

#include "romanov/errors.hpp"
#include "romanov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace romanov {

namespace {

// #{0 <= n <= N : n == r (mod q)}, r < q.
u64 count_upto(u64 N, u64 q, u64 r) { return N < r ? 0 : (N - r) / q + 1; }

// n in [x, 2x) with fn(n) prime, ascending.
std::vector<u64> prime_values(u64 x, const LinearFunction& fn) {
    if (x == 0) return {};
    const u64 top = fn(2 * x - 1);
    const PrimeOracle prime(top + 1);
    const i64 nchunks = static_cast<i64>(chunk_count(x, 2 * x));
    std::vector<std::vector<u64>> parts(static_cast<std::size_t>(nchunks));
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < nchunks; ++c) {
        const u64 b = x + static_cast<u64>(c) * kScanChunk;
        const u64 e = std::min(2 * x, b + kScanChunk);
        auto& out = parts[static_cast<std::size_t>(c)];
        for (u64 n = b; n < e; ++n)
            if (prime(fn.u() * n + fn.v())) out.push_back(n);
    }
    std::vector<u64> all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}

// Saturating u128 power.
u128 pow_sat(u64 b, i64 e, bool& saturated) {
    u128 r = 1;
    for (i64 i = 0; i < e; ++i) {
        if (b != 0 && r > std::numeric_limits<u128>::max() / b) {
            saturated = true;
            return 0;
        }
        r *= b;
    }
    return r;
}

// q^den <= x^num
bool root_le(u64 q, u64 x, const Rational& theta) {
    bool sat_q = false, sat_x = false;
    const u128 lhs = pow_sat(q, theta.den, sat_q);
    const u128 rhs = pow_sat(x, theta.num, sat_x);
    if (!sat_q && !sat_x) return lhs <= rhs;
    if (sat_q != sat_x) return sat_x;
    return static_cast<long double>(theta.den) * std::log(static_cast<long double>(q)) <=
           static_cast<long double>(theta.num) * std::log(static_cast<long double>(x));
}

void check_window_args(u64 q, u64 a, u64 x) {
    if (q == 0) throw DomainError("window: modulus q must be >= 1");
    if (a == 0 || a > q) throw DomainError("window: residue must satisfy 1 <= a <= q");
    if (gcd(a, q) != 1) throw DomainError("window: need gcd(a, q) = 1");
    if (x == 0) throw DomainError("window: x must be >= 1");
}

// q(2x - 1) + y with overflow guard.
u64 window_top(u64 q, u64 x, u64 y) {
    const u128 top = static_cast<u128>(q) * (2 * static_cast<u128>(x) - 1) + y;
    if (top >= kMaxRange) throw OverflowError("window: q(2x - 1) + y exceeds 2^63");
    return static_cast<u64>(top);
}

// Primes p == a (mod q) with lo < p <= hi, ascending.
std::vector<u64> primes_in_class(u64 lo, u64 hi, u64 q, u64 a) {
    if (hi - lo > kWindowMaxSpan)
        throw CapacityError("window: prime range of " + std::to_string(hi - lo) + " exceeds the limit " +
                            std::to_string(kWindowMaxSpan));
    std::vector<u64> out;
    if (hi <= lo) return out;
    const PrimeTable table = PrimeTable::build(lo + 1, hi + 1);
    const u64 r = a % q;
    table.for_each_prime(lo + 1, hi + 1, [&](u64 p) {
        if (p % q == r) out.push_back(p);
    });
    return out;
}

} // namespace

u64 count_A(u64 x, u64 q, u64 a) {
    if (q == 0) throw DomainError("count_A: modulus q must be >= 1");
    if (x == 0) return 0;
    const u64 r = a % q;
    return count_upto(2 * x - 1, q, r) - count_upto(x - 1, q, r);
}

u64 count_P_LA(u64 x, const LinearFunction& fn, u64 q, u64 a) {
    if (q == 0) throw DomainError("count_P_LA: modulus q must be >= 1");
    if (x == 0) return 0;
    if (x > kHyp1MaxX) throw CapacityError("count_P_LA: x exceeds " + std::to_string(kHyp1MaxX));
    const u64 r = a % q;
    const u64 first = x + (r + q - x % q) % q;
    const u64 top = fn(2 * x - 1);
    const PrimeOracle prime(top + 1);
    u64 count = 0;
    for (u64 n = first; n < 2 * x; n += q)
        if (prime(fn.u() * n + fn.v())) ++count;
    return count;
}

Rational phi_L(const LinearFunction& fn, u64 q) {
    if (q == 0) throw DomainError("phi_L: modulus q must be >= 1");
    const u128 qu = static_cast<u128>(q) * fn.u();
    if (qu >= kMaxRange) throw OverflowError("phi_L: q*u exceeds 2^63");
    return {static_cast<i64>(euler_phi(static_cast<u64>(qu))), static_cast<i64>(euler_phi(fn.u()))};
}

u64 max_modulus(u64 x, const Rational& theta) {
    if (!(theta.num > 0 && theta.num < theta.den)) throw DomainError("theta must lie in (0, 1)");
    if (x == 0) throw DomainError("x must be >= 1");
    u64 q = static_cast<u64>(std::pow(static_cast<long double>(x), theta.to_double()));
    q = std::max<u64>(q, 1);
    while (q > 1 && !root_le(q, x, theta)) --q;
    while (root_le(q + 1, x, theta)) ++q;
    return q;
}

Hyp1Report hyp1_evaluate(u64 x, const Rational& theta, std::span<const LinearFunction> fns, u64 B) {
    if (B == 0) throw DomainError("hyp1: B must be >= 1");
    if (x < 2) throw DomainError("hyp1: x must be >= 2");
    if (x > kHyp1MaxX) throw CapacityError("hyp1: x exceeds " + std::to_string(kHyp1MaxX));
    Hyp1Report out;
    out.x = x;
    out.theta = theta;
    out.B = B;
    out.q_max = max_modulus(x, theta);
    if (out.q_max > kHyp1MaxModulus)
        throw CapacityError("hyp1: x^theta = " + std::to_string(out.q_max) + " moduli exceeds the limit " +
                            std::to_string(kHyp1MaxModulus));
    const u64 Q = out.q_max;
    const double xd = static_cast<double>(x);

    out.cond1_terms.assign(Q, 0.0);
    std::vector<double> ratio(Q, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (i64 i = 0; i < static_cast<i64>(Q); ++i) {
        const u64 q = static_cast<u64>(i) + 1;
        u64 worst_num = 0;  // max |count * q - x|
        u64 top = 0;
        for (u64 a = 0; a < q; ++a) {
            const u64 c = count_A(x, q, a);
            const u64 cq = c * q;
            worst_num = std::max(worst_num, cq > x ? cq - x : x - cq);
            top = std::max(top, c);
        }
        out.cond1_terms[static_cast<std::size_t>(i)] = static_cast<double>(worst_num) / static_cast<double>(q);
        ratio[static_cast<std::size_t>(i)] = static_cast<double>(top) * static_cast<double>(q) / xd;
    }
    NeumaierSum c1;
    for (double t : out.cond1_terms) c1.add(t);
    out.cond1 = c1.value();
    out.cond3 = *std::max_element(ratio.begin(), ratio.end());

    const double k = static_cast<double>(fns.size());
    const double lx = std::log(xd);
    for (const auto& fn : fns) {
        Hyp1Function rep{fn};
        const auto hits = prime_values(x, fn);
        rep.P_LA_total = hits.size();
        rep.cond2_reference = std::exp(std::log(static_cast<double>(rep.P_LA_total)) - 100.0 * k * k * std::log(lx));
        std::vector<double> terms(Q, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
        for (i64 i = 0; i < static_cast<i64>(Q); ++i) {
            const u64 q = static_cast<u64>(i) + 1;
            if (gcd(q, B) != 1) continue;
            std::vector<u64> hist(q, 0);
            for (u64 n : hits) ++hist[n % q];
            const Rational phi = phi_L(fn, q);
            const double expected = static_cast<double>(rep.P_LA_total) * static_cast<double>(phi.den) /
                                    static_cast<double>(phi.num);
            double worst = 0.0;
            for (u64 a = 0; a < q; ++a) {
                const u64 La = static_cast<u64>((static_cast<u128>(fn.u()) * a + fn.v()) % q);
                if (gcd(La, q) != 1) continue;
                worst = std::max(worst, std::abs(static_cast<double>(hist[a]) - expected));
            }
            terms[static_cast<std::size_t>(i)] = worst;
        }
        NeumaierSum c2;
        for (double t : terms) c2.add(t);
        rep.cond2 = c2.value();
        out.per_function.push_back(rep);
    }
    return out;
}

WindowReport window_counts(u64 q, u64 a, u64 x, u64 y, u64 threshold) {
    check_window_args(q, a, x);
    const u64 top = window_top(q, x, y);
    WindowReport out;
    out.q = q;
    out.a = a;
    out.x = x;
    out.y = y;
    out.threshold = threshold;
    const auto primes = primes_in_class(q * x, top, q, a);
    out.counts.assign(x, 0);
#pragma omp parallel for schedule(static)
    for (i64 i = 0; i < static_cast<i64>(x); ++i) {
        const u64 base = q * (x + static_cast<u64>(i));
        const auto lo = std::upper_bound(primes.begin(), primes.end(), base);
        const auto hi = std::upper_bound(lo, primes.end(), base + y);
        out.counts[static_cast<std::size_t>(i)] = static_cast<u64>(hi - lo);
    }
    for (u64 c : out.counts) {
        ++out.histogram[c];
        if (c >= threshold) ++out.threshold_hits;
    }
    return out;
}

WindowIdentity window_identity_check(u64 q, u64 a, u64 x, u64 y) {
    check_window_args(q, a, x);
    const u64 top = window_top(q, x, y);
    const u64 r = a % q;
    WindowIdentity out;

    const i64 nchunks = static_cast<i64>(chunk_count(x, 2 * x, 1024));
    std::vector<u64> part(static_cast<std::size_t>(nchunks), 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < nchunks; ++c) {
        const u64 b = x + static_cast<u64>(c) * 1024;
        const u64 e = std::min(2 * x, b + 1024);
        u64 sum = 0;
        for (u64 n = b; n < e; ++n) {
            const u64 lo = q * n;
            for (u64 t = lo + 1 + (r + q - (lo + 1) % q) % q; t <= lo + y; t += q)
                if (is_prime(t)) ++sum;
        }
        part[static_cast<std::size_t>(c)] = sum;
    }
    for (u64 s : part) out.by_window += s;

    const i128 X = x, Q = q, Y = y;
    for (u64 p : primes_in_class(q * x, top, q, a)) {
        const i128 P = p;
        const i128 lo = std::max<i128>(X, exact::floor_div(P - Y + Q - 1, Q));
        const i128 hi = std::min<i128>(2 * X - 1, exact::floor_div(P + Q - 1, Q) - 1);
        if (hi >= lo) out.by_prime += static_cast<u64>(hi - lo + 1);
    }
    return out;
}

} // namespace romanov
