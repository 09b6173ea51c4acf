#pragma once

// Well-distribution sums over moduli q <= x^theta for the integers and for
// primes along linear functions, plus window counts of primes in
// (qn, qn + y] and the exchange identity that swaps the order of summation.

#include "romanov/admissible.hpp"
#include "romanov/quadratic.hpp"

#include <map>
#include <span>
#include <vector>

namespace romanov {

// #{n in [x, 2x) : n == a (mod q)}; q >= 1, any a.
u64 count_A(u64 x, u64 q, u64 a);

// #{n in [x, 2x) : n == a (mod q), fn(n) prime}. OverflowError when
// fn(2x - 1) reaches 2^63.
u64 count_P_LA(u64 x, const LinearFunction& fn, u64 q, u64 a);

// phi(q u) / phi(u), exact.
Rational phi_L(const LinearFunction& fn, u64 q);

// Largest q with q <= x^theta; theta in (0, 1).
u64 max_modulus(u64 x, const Rational& theta);

struct Hyp1Function {
    LinearFunction fn;
    double cond2 = 0.0;
    u64 P_LA_total = 0;           // count_P_LA(x, fn, 1, 0)
    double cond2_reference = 0.0;  // P_LA_total / (log x)^(100 k^2)
};

struct Hyp1Report {
    u64 x = 0;
    Rational theta;
    u64 B = 1;
    u64 q_max = 0;
    std::vector<double> cond1_terms;  // index q - 1
    double cond1 = 0.0;
    double cond3 = 0.0;  // max count_A(x, q, a) * q / x
    std::vector<Hyp1Function> per_function;
};

inline constexpr u64 kHyp1MaxModulus = 1ull << 16;
inline constexpr u64 kHyp1MaxX = 1ull << 34;

// CapacityError past kHyp1MaxModulus moduli or x > kHyp1MaxX.
Hyp1Report hyp1_evaluate(u64 x, const Rational& theta, std::span<const LinearFunction> fns, u64 B = 1);

struct WindowReport {
    u64 q = 1;
    u64 a = 1;
    u64 x = 0;
    u64 y = 0;
    u64 threshold = 0;
    std::vector<u64> counts;          // c(n) for n = x .. 2x - 1
    std::map<u64, u64> histogram;     // c -> #{n : c(n) = c}
    u64 threshold_hits = 0;           // #{n : c(n) >= threshold}
};

inline constexpr u64 kWindowMaxSpan = 1ull << 30;

// c(n) = #{p : qn < p <= qn + y, p == a (mod q)} for n in [x, 2x).
// gcd(a, q) = 1 and 1 <= a <= q, x >= 1.
WindowReport window_counts(u64 q, u64 a, u64 x, u64 y, u64 threshold);

struct WindowIdentity {
    u64 by_window = 0;  // sum over n of c(n), by direct enumeration
    u64 by_prime = 0;   // sum over primes of the n-range each one lands in
    bool holds() const noexcept { return by_window == by_prime; }
};

WindowIdentity window_identity_check(u64 q, u64 a, u64 x, u64 y);

} // namespace romanov
