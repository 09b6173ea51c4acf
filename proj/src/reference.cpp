#include "romanov/reference.hpp"

#include "romanov/errors.hpp"

#include <algorithm>
#include <cmath>

namespace romanov::reference {

std::vector<bool> sieve(u64 hi) {
    std::vector<bool> prime(hi, true);
    for (u64 n = 0; n < std::min<u64>(hi, 2); ++n) prime[n] = false;
    for (u64 p = 2; p * p < hi; ++p)
        if (prime[p])
            for (u64 m = p * p; m < hi; m += p) prime[m] = false;
    return prime;
}

u64 count_primes(u64 x, u64 q, u64 a) {
    u64 count = 0;
    for (u64 n = a % q == 0 ? q : a % q; n <= x; n += q)
        if (is_prime(n)) ++count;
    return count;
}

double chebyshev_psi(u64 x, u64 q, u64 a) {
    NeumaierSum s;
    for (u64 n = a % q == 0 ? q : a % q; n <= x; n += q) s.add(von_mangoldt(n));
    return s.value();
}

u64 f_pow2(u64 n) {
    u64 count = 0;
    for (u64 k = 1; k < 63 && (1ull << k) < n; ++k)
        if (is_prime(n - (1ull << k))) ++count;
    return count;
}

std::vector<u64> exceptional_integers(u64 limit) {
    std::vector<u64> out;
    for (u64 n = 3; n <= limit; ++n) {
        bool all = true;
        for (u64 k = 1; (1ull << k) < n && all; ++k) all = is_prime(n - (1ull << k));
        if (all) out.push_back(n);
    }
    return out;
}

DensityReport density_scan(u64 limit, std::span<const u64> checkpoints) {
    DensityReport report;
    std::size_t next = 0;
    u64 odd = 0, rep = 0;
    for (u64 n = 1; n <= limit && next < checkpoints.size(); ++n) {
        if (n >= 3 && n % 2 == 1) {
            ++odd;
            if (f_pow2(n) > 0) ++rep;
        }
        while (next < checkpoints.size() && checkpoints[next] == n) {
            report.checkpoints.push_back({n, odd, rep, odd ? static_cast<double>(rep) / static_cast<double>(odd) : 0.0});
            ++next;
        }
    }
    return report;
}

std::vector<Champion> champions(u64 limit) {
    std::vector<Champion> out;
    u64 best = 0;
    for (u64 n = 1; n <= limit; n += 2) {
        const u64 f = f_pow2(n);
        if (f > best) {
            best = f;
            out.push_back({n, f});
        }
    }
    return out;
}

ClusterScanResult cluster_scan(std::span<const LinearFunction> funcs, u64 x, u64 threshold,
                               std::size_t witness_cap) {
    ClusterScanResult out{x, threshold, 0, {}};
    for (u64 n = x; n < 2 * x; ++n) {
        u64 hits = 0;
        for (const auto& f : funcs) hits += is_prime(f(n)) ? 1 : 0;
        if (hits >= threshold) {
            ++out.count;
            if (out.witnesses.size() < witness_cap) out.witnesses.push_back(n);
        }
    }
    return out;
}

ClassScan verify_class(const ResidueClass& cls, u64 limit, std::size_t exception_cap) {
    ClassScan out;
    out.limit = limit;
    for (u64 n = cls.r; n <= limit; n += cls.M) {
        ++out.members_checked;
        const u64 f = f_pow2(n);
        if (n <= cls.M) {
            out.small_members.push_back({n, f});
            continue;
        }
        ++out.members_above_modulus;
        if (f > 0) {
            out.holds = false;
            if (out.exceptions.size() < exception_cap) out.exceptions.push_back({n, f});
        }
    }
    return out;
}

std::vector<u64> beatty_counts(const BeattyParams& params, u64 x, u64 d) {
    std::vector<u64> counts(d, 0);
    for (u64 n = 1; n <= x; ++n) {
        const i64 t = params.term(n);
        ++counts[static_cast<std::size_t>(((t % static_cast<i64>(d)) + static_cast<i64>(d)) % static_cast<i64>(d))];
    }
    return counts;
}

LambdaSum lambda_sum_beatty(const BeattyParams& params, u64 N, u64 q1, u64 a1, u64 q2, u64 a2) {
    LambdaSum out;
    out.M = params.term(N);
    NeumaierSum S, T;
    for (u64 n = 1; n <= N; ++n) {
        const u64 m = static_cast<u64>(params.term(n));
        if (m % q1 == a1 % q1) S.add(von_mangoldt(q2 * m + a2));
    }
    for (u64 m = 1; m <= static_cast<u64>(out.M); ++m)
        if (m % q1 == a1 % q1) T.add(von_mangoldt(q2 * m + a2));
    out.S = S.value();
    out.T = T.value() / params.beta().to_double();
    out.deviation = std::abs(out.S - out.T) / std::max(out.T, 1.0);
    return out;
}

std::vector<u64> window_counts(u64 q, u64 a, u64 x, u64 y) {
    std::vector<u64> counts;
    for (u64 n = x; n < 2 * x; ++n) {
        u64 c = 0;
        for (u64 p = q * n + 1; p <= q * n + y; ++p)
            if (p % q == a % q && is_prime(p)) ++c;
        counts.push_back(c);
    }
    return counts;
}

Hyp1Report hyp1_evaluate(u64 x, const Rational& theta, std::span<const LinearFunction> fns, u64 B) {
    Hyp1Report out;
    out.x = x;
    out.theta = theta;
    out.B = B;
    out.q_max = max_modulus(x, theta);
    const double xd = static_cast<double>(x);
    NeumaierSum c1;
    for (u64 q = 1; q <= out.q_max; ++q) {
        double worst = 0.0;
        for (u64 a = 0; a < q; ++a) {
            u64 c = 0;
            for (u64 n = x; n < 2 * x; ++n) c += n % q == a ? 1 : 0;
            worst = std::max(worst, std::abs(static_cast<double>(c * q) - xd) / static_cast<double>(q));
            out.cond3 = std::max(out.cond3, static_cast<double>(c) * static_cast<double>(q) / xd);
        }
        out.cond1_terms.push_back(worst);
        c1.add(worst);
    }
    out.cond1 = c1.value();
    const double k = static_cast<double>(fns.size());
    for (const auto& fn : fns) {
        Hyp1Function rep{fn};
        rep.P_LA_total = count_P_LA(x, fn, 1, 0);
        rep.cond2_reference =
            std::exp(std::log(static_cast<double>(rep.P_LA_total)) - 100.0 * k * k * std::log(std::log(xd)));
        NeumaierSum c2;
        for (u64 q = 1; q <= out.q_max; ++q) {
            if (gcd(q, B) != 1) {
                c2.add(0.0);
                continue;
            }
            const Rational phi = phi_L(fn, q);
            const double expected = static_cast<double>(rep.P_LA_total) / phi.to_double();
            double worst = 0.0;
            for (u64 a = 0; a < q; ++a) {
                if (gcd((fn.u() * a + fn.v()) % q, q) != 1) continue;
                worst = std::max(worst, std::abs(static_cast<double>(count_P_LA(x, fn, q, a)) - expected));
            }
            c2.add(worst);
        }
        rep.cond2 = c2.value();
        out.per_function.push_back(rep);
    }
    return out;
}

} // namespace romanov::reference
