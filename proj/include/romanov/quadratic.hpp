#pragma once

// Exact arithmetic on numbers (a + b*sqrt(D)) / c with integer a, b, c and a
// fixed non-square D. Every floor and every comparison is decided with
// integer inequalities; doubles appear only in to_double() for reporting.
// Intermediate products are overflow-checked in 128 bits and raise
// PrecisionError instead of returning a wrong answer.

#include "romanov/primes.hpp"

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace romanov {

// Reduced fraction with positive denominator.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n, i64 d);

    double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& x, const Rational& y);
};

// "num/den" or a bare integer.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

namespace exact {
// floor(x / y) for y != 0.
i128 floor_div(i128 x, i128 y);
// floor(sqrt(n))
u128 isqrt(u128 n) noexcept;
i128 mul(i128 x, i128 y);  // PrecisionError on overflow
i128 add(i128 x, i128 y);
// sign of x + y*sqrt(D), D > 0 non-square
int sign(i128 x, i128 y, u64 D);
// floor(y * sqrt(D)), D non-square
i128 floor_sqrt_multiple(i128 y, u64 D);
} // namespace exact

class QuadSurd {
public:
    QuadSurd(i128 a, i128 b, i128 c, u64 D);

    i128 a() const noexcept { return a_; }
    i128 b() const noexcept { return b_; }
    i128 c() const noexcept { return c_; }
    u64 D() const noexcept { return D_; }

    int sign() const { return exact::sign(a_, b_, D_); }
    i128 floor() const { return exact::floor_div(exact::add(a_, exact::floor_sqrt_multiple(b_, D_)), c_); }
    double to_double() const noexcept;

    QuadSurd scaled(i128 k) const { return {exact::mul(a_, k), exact::mul(b_, k), c_, D_}; }
    QuadSurd abs() const { return sign() < 0 ? QuadSurd{-a_, -b_, c_, D_} : *this; }

    // Both sides must share D (a rational compares as b = 0).
    friend std::strong_ordering operator<=>(const QuadSurd& x, const QuadSurd& y);
    friend bool operator==(const QuadSurd& x, const QuadSurd& y) { return (x <=> y) == 0; }
    friend std::strong_ordering operator<=>(const QuadSurd& x, const Rational& r);

private:
    i128 a_, b_, c_;  // c_ > 0
    u64 D_;
};

// (P + sqrt(D)) / Q, normalized so that Q divides D - P^2.
class QuadraticIrrational {
public:
    // D must be a positive non-square, Q != 0; DomainError otherwise.
    QuadraticIrrational(i64 P, u64 D, i64 Q);

    static QuadraticIrrational sqrt(u64 D) { return {0, D, 1}; }
    static QuadraticIrrational golden() { return {1, 5, 2}; }

    i64 P() const noexcept { return P_; }
    u64 D() const noexcept { return D_; }
    i64 Q() const noexcept { return Q_; }

    QuadSurd value() const { return {P_, 1, Q_, D_}; }
    double to_double() const noexcept { return value().to_double(); }

    // q * beta as an exact surd.
    QuadSurd times(i128 q) const { return value().scaled(q); }

    friend bool operator==(const QuadraticIrrational&, const QuadraticIrrational&) = default;

private:
    i64 P_;
    u64 D_;
    i64 Q_;
};

// "sqrt:D", "quad:P,D,Q" or "golden".
QuadraticIrrational parse_quadratic(std::string_view text);
std::string to_string(const QuadraticIrrational& beta);

struct Convergent {
    i64 p = 0;
    i64 q = 1;
    friend bool operator==(const Convergent&, const Convergent&) = default;
};

struct ContinuedFraction {
    std::vector<i64> partial_quotients;  // a_0, a_1, ...
    std::vector<Convergent> convergents; // p_n / q_n
    // max a_i over i >= 1 (0 when only a_0 is known)
    i64 max_partial_quotient() const;
};

// Exact expansion by the integer (P, Q) recurrence. terms >= 1.
ContinuedFraction cf_expand(const QuadraticIrrational& beta, std::size_t terms);

// Expands until q_n > bound (or the 64-bit convergent limit), at least one term.
ContinuedFraction cf_expand_until(const QuadraticIrrational& beta, u64 bound);

struct NearestInt {
    QuadSurd distance;  // ||q beta|| >= 0
    i128 nearest;       // the integer achieving it
};

// ||q beta|| and the nearest integer; q >= 1.
NearestInt nearest_int_dist(const QuadraticIrrational& beta, u64 q);

} // namespace romanov
