#include "romanov/quadratic.hpp"

#include "romanov/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace romanov {

namespace {
i64 parse_i64(std::string_view text, std::string_view what) {
    i64 v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
        throw DomainError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    return v;
}
} // namespace

// ---------------------------------------------------------------------------

Rational::Rational(i64 n, i64 d) : num(n), den(d) {
    if (d == 0) throw DomainError("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i64 g = static_cast<i64>(gcd(static_cast<u64>(num < 0 ? -num : num), static_cast<u64>(den)));
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
    return static_cast<i128>(x.num) * y.den <=> static_cast<i128>(y.num) * x.den;
}

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return {parse_i64(text, "rational"), 1};
    return {parse_i64(text.substr(0, slash), "rational numerator"),
            parse_i64(text.substr(slash + 1), "rational denominator")};
}

std::string to_string(const Rational& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

// ---------------------------------------------------------------------------

namespace exact {

i128 floor_div(i128 x, i128 y) {
    if (y == 0) throw DomainError("floor_div: division by zero");
    i128 q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return q;
}

u128 isqrt(u128 n) noexcept {
    if (n == 0) return 0;
    u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
    constexpr u128 kMaxRoot = (static_cast<u128>(1) << 64) - 1;
    if (r > kMaxRoot) r = kMaxRoot;
    while (r * r > n) --r;
    while (r < kMaxRoot && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

i128 mul(i128 x, i128 y) {
    i128 out;
    if (__builtin_mul_overflow(x, y, &out)) throw PrecisionError("exact arithmetic: 128-bit product overflow");
    return out;
}

i128 add(i128 x, i128 y) {
    i128 out;
    if (__builtin_add_overflow(x, y, &out)) throw PrecisionError("exact arithmetic: 128-bit sum overflow");
    return out;
}

int sign(i128 x, i128 y, u64 D) {
    auto sgn = [](i128 v) { return (v > 0) - (v < 0); };
    if (y == 0 || D == 0) return sgn(x);
    if (x == 0) return sgn(y);
    if (sgn(x) == sgn(y)) return sgn(x);
    const i128 xx = mul(x, x);
    const i128 yyD = mul(mul(y, y), static_cast<i128>(D));
    // x and y have opposite signs: the sign follows whichever part dominates
    if (xx == yyD) return 0;
    return xx > yyD ? sgn(x) : sgn(y);
}

i128 floor_sqrt_multiple(i128 y, u64 D) {
    if (y == 0 || D == 0) return 0;
    const i128 t = mul(mul(y, y), static_cast<i128>(D));
    const u128 r = isqrt(static_cast<u128>(t));
    const bool exact_root = r * r == static_cast<u128>(t);
    const i128 root = static_cast<i128>(r);
    if (y > 0) return root;
    return exact_root ? -root : -(root + 1);
}

} // namespace exact

// ---------------------------------------------------------------------------

QuadSurd::QuadSurd(i128 a, i128 b, i128 c, u64 D) : a_(a), b_(b), c_(c), D_(D) {
    if (c == 0) throw DomainError("QuadSurd: zero denominator");
    if (c < 0) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
    }
}

double QuadSurd::to_double() const noexcept {
    const long double v = (static_cast<long double>(a_) + static_cast<long double>(b_) * std::sqrt(static_cast<long double>(D_))) /
                          static_cast<long double>(c_);
    return static_cast<double>(v);
}

std::strong_ordering operator<=>(const QuadSurd& x, const QuadSurd& y) {
    if (x.b_ != 0 && y.b_ != 0 && x.D_ != y.D_) throw DomainError("QuadSurd: comparing different radicands");
    const u64 D = x.b_ != 0 ? x.D_ : y.D_;
    const i128 ra = exact::add(exact::mul(x.a_, y.c_), -exact::mul(y.a_, x.c_));
    const i128 rb = exact::add(exact::mul(x.b_, y.c_), -exact::mul(y.b_, x.c_));
    const int s = exact::sign(ra, rb, D);
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const QuadSurd& x, const Rational& r) {
    return x <=> QuadSurd(r.num, 0, r.den, x.D_);
}

// ---------------------------------------------------------------------------

QuadraticIrrational::QuadraticIrrational(i64 P, u64 D, i64 Q) : P_(P), D_(D), Q_(Q) {
    if (Q == 0) throw DomainError("quadratic irrational: Q must be nonzero");
    if (D == 0) throw DomainError("quadratic irrational: D must be positive");
    const u64 r = romanov::isqrt(D);
    if (r * r == D)
        throw DomainError("quadratic irrational: D = " + std::to_string(D) + " is a perfect square (rational value)");
    const i128 disc = static_cast<i128>(D) - static_cast<i128>(P) * P;
    if (disc % Q != 0) {
        const i128 aq = Q < 0 ? -static_cast<i128>(Q) : Q;
        const i128 nP = exact::mul(P, aq);
        const i128 nD = exact::mul(static_cast<i128>(D), exact::mul(Q, Q));
        const i128 nQ = exact::mul(Q, aq);
        if (nD >= static_cast<i128>(kMaxRange) || nP > std::numeric_limits<i64>::max() ||
            nP < std::numeric_limits<i64>::min() || nQ > std::numeric_limits<i64>::max() ||
            nQ < std::numeric_limits<i64>::min())
            throw PrecisionError("quadratic irrational: normalization overflows 64 bits");
        P_ = static_cast<i64>(nP);
        D_ = static_cast<u64>(nD);
        Q_ = static_cast<i64>(nQ);
    }
}

QuadraticIrrational parse_quadratic(std::string_view text) {
    if (text == "golden") return QuadraticIrrational::golden();
    if (text.starts_with("sqrt:")) {
        const i64 D = parse_i64(text.substr(5), "sqrt radicand");
        if (D <= 0) throw DomainError("sqrt:D needs D > 0");
        return QuadraticIrrational::sqrt(static_cast<u64>(D));
    }
    if (text.starts_with("quad:")) {
        auto rest = text.substr(5);
        const auto c1 = rest.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : rest.find(',', c1 + 1);
        if (c2 == std::string_view::npos) throw DomainError("quad:P,D,Q needs three comma-separated integers");
        const i64 P = parse_i64(rest.substr(0, c1), "P");
        const i64 D = parse_i64(rest.substr(c1 + 1, c2 - c1 - 1), "D");
        const i64 Q = parse_i64(rest.substr(c2 + 1), "Q");
        if (D <= 0) throw DomainError("quad:P,D,Q needs D > 0");
        return {P, static_cast<u64>(D), Q};
    }
    throw DomainError("beta must be 'sqrt:D', 'quad:P,D,Q' or 'golden', got '" + std::string(text) + "'");
}

std::string to_string(const QuadraticIrrational& beta) {
    return "(" + std::to_string(beta.P()) + "+sqrt(" + std::to_string(beta.D()) + "))/" + std::to_string(beta.Q());
}

// ---------------------------------------------------------------------------

i64 ContinuedFraction::max_partial_quotient() const {
    i64 k = 0;
    for (std::size_t i = 1; i < partial_quotients.size(); ++i) k = std::max(k, partial_quotients[i]);
    return k;
}

namespace {

template <class Done>
ContinuedFraction expand(const QuadraticIrrational& beta, Done&& done) {
    ContinuedFraction cf;
    i128 P = beta.P(), Q = beta.Q();
    const u64 D = beta.D();
    i128 p1 = 1, p2 = 0, q1 = 0, q2 = 1;  // p_{n-1}, p_{n-2}, q_{n-1}, q_{n-2}
    constexpr i128 kLimit = std::numeric_limits<i64>::max();
    while (!done(cf)) {
        const i128 a = QuadSurd(P, 1, Q, D).floor();
        const i128 p = exact::add(exact::mul(a, p1), p2);
        const i128 q = exact::add(exact::mul(a, q1), q2);
        if (a > kLimit || a < -kLimit || p > kLimit || p < -kLimit || q > kLimit)
            throw PrecisionError("cf_expand: convergent exceeds 64 bits after " +
                                 std::to_string(cf.partial_quotients.size()) + " terms");
        cf.partial_quotients.push_back(static_cast<i64>(a));
        cf.convergents.push_back({static_cast<i64>(p), static_cast<i64>(q)});
        p2 = p1;
        p1 = p;
        q2 = q1;
        q1 = q;
        const i128 nP = exact::add(exact::mul(a, Q), -P);
        const i128 num = exact::add(static_cast<i128>(D), -exact::mul(nP, nP));
        if (num % Q != 0) throw InvariantError("cf_expand: lost the Q | D - P^2 normalization");
        P = nP;
        Q = num / Q;
    }
    return cf;
}

} // namespace

ContinuedFraction cf_expand(const QuadraticIrrational& beta, std::size_t terms) {
    if (terms == 0) throw DomainError("cf_expand: terms must be >= 1");
    return expand(beta, [&](const ContinuedFraction& cf) { return cf.partial_quotients.size() >= terms; });
}

ContinuedFraction cf_expand_until(const QuadraticIrrational& beta, u64 bound) {
    return expand(beta, [&](const ContinuedFraction& cf) {
        return !cf.convergents.empty() && static_cast<u64>(cf.convergents.back().q) > bound;
    });
}

NearestInt nearest_int_dist(const QuadraticIrrational& beta, u64 q) {
    if (q == 0) throw DomainError("nearest_int_dist: q must be >= 1");
    const QuadSurd s = beta.times(static_cast<i128>(q));
    const QuadSurd half_up(exact::add(exact::mul(2, s.a()), s.c()), exact::mul(2, s.b()), exact::mul(2, s.c()), s.D());
    const i128 n = half_up.floor();
    const QuadSurd diff(exact::add(s.a(), -exact::mul(n, s.c())), s.b(), s.c(), s.D());
    return {diff.abs(), n};
}

} // namespace romanov
