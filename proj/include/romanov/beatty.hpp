#pragma once

// Beatty sequences floor(beta*k + gamma) for quadratic irrational slopes:
// exact terms, best-approximation and type-1 checks, distribution in residue
// classes, and von Mangoldt sums along the sequence.

#include "romanov/quadratic.hpp"
#include "romanov/representation.hpp"

#include <optional>
#include <span>
#include <vector>

namespace romanov {

class BeattyParams {
public:
    // beta > 1 and 0 <= gamma < beta, else DomainError.
    BeattyParams(QuadraticIrrational beta, Rational gamma);

    const QuadraticIrrational& beta() const noexcept { return beta_; }
    const Rational& gamma() const noexcept { return gamma_; }

    // floor(beta*k + gamma), exact.
    i64 term(u64 k) const;

private:
    QuadraticIrrational beta_;
    Rational gamma_;
    // term(k) = floor((A k + C + floor(B k sqrt(D))) / E), E > 0
    i128 A_, B_, C_, E_;
};

inline i64 beatty_term(const BeattyParams& params, u64 k) { return params.term(k); }

struct BestApproxCheck {
    bool holds = true;
    // first (n, q) with q <= q_n and ||q beta|| < ||q_n beta||
    std::optional<std::pair<std::size_t, u64>> violation;
};

// ||q_n beta|| <= ||q beta|| for every convergent denominator q_n in cf and
// every 1 <= q <= q_n.
BestApproxCheck best_approx_check(const ContinuedFraction& cf, const QuadraticIrrational& beta);

struct TypeBound {
    QuadSurd min_value;  // min_{q <= Q} q ||q beta||
    u64 argmin = 1;
    i64 K = 0;           // max partial quotient a_i, i >= 1, through q_n > Q
    Rational bound;      // 1 / ((K+1)(K+2))
    bool holds = false;  // min_value >= bound
};

TypeBound type_bound_check(const QuadraticIrrational& beta, u64 Q);

struct ApCount {
    u64 a = 0;
    u64 count = 0;
    double main_term = 0.0;         // x / d
    double normalized_error = 0.0;  // |count - x/d| / (d (log x)^3)
};

// #{1 <= n <= x : floor(beta n + gamma) == a (mod d)}; d >= 2, a < d.
ApCount beatty_count_ap(const BeattyParams& params, u64 x, u64 d, u64 a);

// One pass over n <= x, reports for every modulus in `moduli` and every
// residue a in [0, d): result[i][a].
std::vector<std::vector<ApCount>> beatty_count_ap_all(const BeattyParams& params, u64 x,
                                                      std::span<const u64> moduli);

struct LambdaSum {
    double S = 0.0;
    double T = 0.0;
    double deviation = 0.0;  // |S - T| / max(T, 1)
    i64 M = 0;               // floor(beta N + gamma)
};

// S = sum_{n <= N, b_n == a1 (q1)} Lambda(q2 b_n + a2),
// T = beta^{-1} sum_{1 <= m <= M, m == a1 (q1)} Lambda(q2 m + a2),
// with b_n the Beatty terms. Needs gcd(a2, q2) = 1, gcd(q2 a1 + a2, q1) = 1
// and 0 <= a_j <= q_j.
LambdaSum lambda_sum_beatty(const BeattyParams& params, u64 N, u64 q1, u64 a1, u64 q2, u64 a2);

struct BeattyRecord {
    u64 k = 0;
    u64 n = 0;
    u64 f = 0;
};

// max f_general(seq, floor(beta k + gamma)) over 1 <= k <= k_max, smallest n
// on ties.
BeattyRecord beatty_record_search(const SequencePair& seq, const BeattyParams& params, u64 k_max);

} // namespace romanov
