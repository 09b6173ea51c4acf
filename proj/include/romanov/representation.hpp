#pragma once

// Representation functions n = p + 2^k and l_i n = p + a_i, plus the range
// scans built on them (exceptional integers, Romanov density, records).
//
// Convention: k >= 1 and 2^k < n, so the shifts n - 2^k are all >= 1.

#include "romanov/primes.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace romanov {

// Paired sequences a_1 < a_2 < ... and multipliers l_i with gcd(l_i, a_i) = 1.
class SequencePair {
public:
    SequencePair() = default;
    // Throws DomainError naming the first offending index.
    SequencePair(std::vector<u64> a, std::vector<u64> l);

    // a_i = 2^i for i = 1..count, every l_i = 1.
    static SequencePair powers_of_two(unsigned count = 62);

    std::size_t size() const noexcept { return a_.size(); }
    bool empty() const noexcept { return a_.empty(); }
    std::span<const u64> a() const noexcept { return a_; }
    std::span<const u64> l() const noexcept { return l_; }

    // #{i : a_i <= x}
    std::size_t prefix_count(u64 x) const noexcept;

private:
    std::vector<u64> a_;
    std::vector<u64> l_;
};

// Parses "a_i l_i" or "a_i" lines (l defaults to 1). Every violation is a
// FormatError naming its line.
SequencePair load_sequence_pair(std::istream& in);

namespace detail {
template <class IsPrime>
u64 pow2_shift_count(u64 n, const IsPrime& is_prime_fn) {
    u64 c = 0;
    for (u64 shift = 2; shift < n; shift <<= 1) {
        c += is_prime_fn(n - shift) ? 1 : 0;
        if (shift > (u64{1} << 62)) break;
    }
    return c;
}

template <class IsPrime>
bool any_pow2_shift_prime(u64 n, const IsPrime& is_prime_fn) {
    for (u64 shift = 2; shift < n; shift <<= 1) {
        if (is_prime_fn(n - shift)) return true;
        if (shift > (u64{1} << 62)) break;
    }
    return false;
}
} // namespace detail

// f(n) = #{k >= 1 : 2^k < n, n - 2^k prime}. n >= 1.
u64 f_pow2(u64 n);

// #{i <= A(n) : l_i n - a_i prime}. OverflowError when l_i n >= 2^63.
u64 f_general(const SequencePair& seq, u64 n);

// All n <= limit for which {k >= 1 : 2^k < n} is nonempty and every
// n - 2^k is prime, ascending.
std::vector<u64> exceptional_integers(u64 limit);

struct DensityCheckpoint {
    u64 x = 0;
    u64 odd_total = 0;       // odd n with 3 <= n <= x
    u64 representable = 0;   // of those, f(n) >= 1
    double ratio = 0.0;
};

struct DensityReport {
    std::vector<DensityCheckpoint> checkpoints;
};

// checkpoints must be ascending with the last one <= limit.
DensityReport density_scan(u64 limit, std::span<const u64> checkpoints);

struct Champion {
    u64 n = 0;
    u64 f = 0;
    friend bool operator==(const Champion&, const Champion&) = default;
};

// Record holders of f over odd n <= limit: f(n) > f(m) for every odd m < n,
// starting from f >= 1. limit >= 5.
std::vector<Champion> champions(u64 limit);

} // namespace romanov
