#pragma once

// Prime engine: deterministic primality, bit-packed segmented sieve tables,
// prime counting in progressions, Chebyshev sums and the small modular
// toolkit (inverse, CRT, totient, largest prime factor) used by the rest of
// the library.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace romanov {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Numbers per sieve segment. Tunable; does not change any result.
inline constexpr u64 kSegmentSpan = 1ull << 20;
// Largest table a caller gets without asking for more, in bytes.
inline constexpr u64 kDefaultTableBudget = 1ull << 31;
inline constexpr u64 kMaxRange = 1ull << 63;

// ---------------------------------------------------------------------------
// Error-compensated (Neumaier) accumulator.
// ---------------------------------------------------------------------------
class NeumaierSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    void merge(const NeumaierSum& other) noexcept {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Modular arithmetic
// ---------------------------------------------------------------------------
inline u64 mulmod(u64 a, u64 b, u64 m) noexcept {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) noexcept;

u64 gcd(u64 a, u64 b) noexcept;

// Exact integer square root: largest r with r*r <= n.
u64 isqrt(u64 n) noexcept;

// Unique b in [0, m) with a*b == 1 (mod m). Throws NoInverseError when
// gcd(a, m) > 1 and DomainError when m == 0.
u64 mod_inverse(i64 a, u64 m);

struct Congruence {
    u64 residue = 0;
    u64 modulus = 1;
    friend bool operator==(const Congruence&, const Congruence&) = default;
};

// Chinese remaindering over pairwise coprime moduli. The error message for
// non-coprime input names the offending pair; a product beyond 2^63 is an
// OverflowError.
Congruence crt_combine(std::span<const Congruence> pairs);

// ---------------------------------------------------------------------------
// Primality and factorization
// ---------------------------------------------------------------------------

// Deterministic strong-pseudoprime test, exact for every 64-bit n.
bool is_prime(u64 n) noexcept;

// Prime factorization as (prime, exponent) pairs in increasing prime order.
std::vector<std::pair<u64, int>> factorize(u64 n);

u64 euler_phi(u64 n);
u64 largest_prime_factor(u64 n);

// p if n == p^k for a prime p and k >= 1, otherwise 0.
u64 prime_power_base(u64 n);

double von_mangoldt(u64 n);

// All primes <= limit, by a plain sieve. Intended for small limits.
std::vector<u64> primes_up_to(u64 limit);

// ---------------------------------------------------------------------------
// PrimeTable: one bit per odd number of [lo, hi), bit i <-> odd_base + 2i.
// ---------------------------------------------------------------------------
class PrimeTable {
public:
    PrimeTable() = default;

    // Segmented sieve of [lo, hi); segments are filled in parallel and the
    // result is bit-identical for any thread count.
    static PrimeTable build(u64 lo, u64 hi, u64 byte_budget = kDefaultTableBudget);

    u64 lo() const noexcept { return lo_; }
    u64 hi() const noexcept { return hi_; }
    bool contains(u64 n) const noexcept { return n >= lo_ && n < hi_; }

    // Throws std::out_of_range when n is outside [lo, hi).
    bool is_prime(u64 n) const;

    // Unchecked variant for hot loops that already know lo <= n < hi.
    bool test(u64 n) const noexcept {
        if ((n & 1) == 0) return n == 2;
        const u64 i = (n - odd_base_) >> 1;
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    u64 odd_base() const noexcept { return odd_base_; }
    u64 bit_count() const noexcept { return nbits_; }
    std::span<const u64> words() const noexcept { return words_; }

    // Number of primes in [lo, hi).
    u64 count() const noexcept;

    // Calls f(p) for every prime p in [from, to) intersected with [lo, hi),
    // in increasing order.
    template <class F>
    void for_each_prime(u64 from, u64 to, F&& f) const {
        from = from < lo_ ? lo_ : from;
        to = to > hi_ ? hi_ : to;
        if (from >= to) return;
        if (from <= 2 && to > 2) f(u64{2});
        u64 first = from | 1;
        if (first < odd_base_) first = odd_base_;
        if (first >= to) return;
        const u64 b0 = (first - odd_base_) >> 1;
        const u64 b1 = (to - 1 - odd_base_) / 2 + 1;
        for (u64 w = b0 >> 6; w <= (b1 - 1) >> 6; ++w) {
            u64 bits = words_[w];
            if (w == b0 >> 6) bits &= ~0ull << (b0 & 63);
            if (w == (b1 - 1) >> 6 && ((b1 & 63) != 0)) bits &= (1ull << (b1 & 63)) - 1;
            while (bits) {
                const u64 i = (w << 6) + static_cast<u64>(__builtin_ctzll(bits));
                f(odd_base_ + 2 * i);
                bits &= bits - 1;
            }
        }
    }

    // Cache file: "PTB1", lo and hi as little-endian u64, then the packed
    // odd-number bits, LSB first within each byte.
    void write(std::ostream& out) const;
    static PrimeTable read(std::istream& in);

    friend bool operator==(const PrimeTable&, const PrimeTable&) = default;

private:
    PrimeTable(u64 lo, u64 hi);

    u64 lo_ = 0;
    u64 hi_ = 0;
    u64 odd_base_ = 1;
    u64 nbits_ = 0;
    std::vector<u64> words_;
};

// Primality for scans whose values live in [0, hi): a sieve table when it
// fits the budget, the Miller-Rabin test otherwise.
class PrimeOracle {
public:
    explicit PrimeOracle(u64 hi, u64 byte_budget = 1ull << 28);

    bool operator()(u64 n) const noexcept {
        if (table_ && n < table_->hi()) return table_->test(n);
        return romanov::is_prime(n);
    }
    bool sieved() const noexcept { return table_.has_value(); }

private:
    std::optional<PrimeTable> table_;
};

// ---------------------------------------------------------------------------
// Counting in progressions
// ---------------------------------------------------------------------------
struct ArithmeticCounts {
    u64 x = 0;
    u64 q = 1;
    u64 a = 0;
    u64 count = 0;
};

// #{p <= x : p == a (mod q)}. q >= 1, a < q.
ArithmeticCounts count_primes(u64 x, u64 q = 1, u64 a = 0);

// sum_{n <= x, n == a (mod q)} Lambda(n), compensated and reduced in a
// fixed segment order.
double chebyshev_psi(u64 x, u64 q = 1, u64 a = 0);

// sum_{p <= x} log p
double chebyshev_theta(u64 x);

namespace detail {
// Sieve nbits odd numbers starting at odd `first` into words (bit i <->
// first + 2i). `odd_primes` must hold every odd prime up to the square root
// of the last number.
void sieve_odd_block(std::span<const u64> odd_primes, u64 first, u64 nbits, u64* words);
std::vector<u64> odd_sieving_primes(u64 hi);
} // namespace detail

} // namespace romanov
