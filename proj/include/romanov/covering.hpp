#pragma once

// Covering systems k == r_i (mod m_i) with primes p_i | 2^{m_i} - 1, and the
// odd residue class they force to have no representation n = p + 2^k.

#include "romanov/primes.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace romanov {

struct CoveringEntry {
    u64 r = 0;
    u64 m = 1;
    u64 p = 3;
    friend bool operator==(const CoveringEntry&, const CoveringEntry&) = default;
};

class CoveringSystem {
public:
    // Structural checks only: r < m, p an odd prime, primes pairwise distinct.
    explicit CoveringSystem(std::vector<CoveringEntry> entries);

    // Moduli (2,3,4,8,12,24) with primes (3,7,5,17,13,241).
    static CoveringSystem reference();

    const std::vector<CoveringEntry>& entries() const noexcept { return entries_; }

    // lcm of the moduli; OverflowError past 2^63.
    u64 lcm() const;

private:
    std::vector<CoveringEntry> entries_;
};

// "r m p" per line, '#' comments.
CoveringSystem load_covering_system(std::istream& in);

struct CoveringCheck {
    bool covered = false;
    u64 lcm = 1;
    std::optional<u64> first_uncovered;
};

// Exhaustive over [0, lcm); CapacityError beyond max_lcm.
CoveringCheck verify_covering(const CoveringSystem& system, u64 max_lcm = 1ull << 32);

// 2^m == 1 (mod p)
bool order_divides(u64 p, u64 m);

struct ResidueClass {
    u64 r = 0;
    u64 M = 2;
    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

// r == 1 (mod 2) and r == 2^{r_i} (mod p_i), M = 2 * prod p_i. Requires a
// covering system whose every entry passes order_divides.
ResidueClass build_class(const CoveringSystem& system);

struct ClassMember {
    u64 n = 0;
    u64 f = 0;
    friend bool operator==(const ClassMember&, const ClassMember&) = default;
};

struct ClassScan {
    bool holds = true;                      // no exception above M
    u64 limit = 0;
    u64 members_checked = 0;                // members n <= limit
    u64 members_above_modulus = 0;          // members M < n <= limit
    std::vector<ClassMember> exceptions;    // members > M with f(n) > 0
    std::vector<ClassMember> small_members; // members <= M, reported with f(n)
};

// Checks f(n) = 0 for every n == r (mod M), n <= limit. Members above M are
// the claim; members <= M can meet n - 2^k = p_i and are listed apart.
ClassScan verify_class(const ResidueClass& cls, u64 limit, std::size_t exception_cap = 100);

} // namespace romanov
