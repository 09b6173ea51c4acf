#include "romanov/covering.hpp"

#include "romanov/errors.hpp"
#include "romanov/parallel.hpp"
#include "romanov/representation.hpp"
#include "romanov/text_input.hpp"

#include <algorithm>
#include <set>

namespace romanov {

CoveringSystem::CoveringSystem(std::vector<CoveringEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DomainError("CoveringSystem: no entries");
    std::set<u64> primes;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        const std::string at = " (entry " + std::to_string(i) + ")";
        if (e.m == 0) throw DomainError("CoveringSystem: modulus must be >= 1" + at);
        if (e.r >= e.m) throw DomainError("CoveringSystem: residue must satisfy r < m" + at);
        if (e.p == 2 || !is_prime(e.p)) throw DomainError("CoveringSystem: p must be an odd prime" + at);
        if (!primes.insert(e.p).second) throw DomainError("CoveringSystem: duplicate prime " + std::to_string(e.p) + at);
    }
}

CoveringSystem CoveringSystem::reference() {
    return CoveringSystem({{0, 2, 3}, {0, 3, 7}, {1, 4, 5}, {3, 8, 17}, {7, 12, 13}, {23, 24, 241}});
}

u64 CoveringSystem::lcm() const {
    u64 l = 1;
    for (const auto& e : entries_) {
        const u128 next = static_cast<u128>(l / gcd(l, e.m)) * e.m;
        if (next >= kMaxRange) throw OverflowError("covering system: lcm of moduli exceeds 2^63");
        l = static_cast<u64>(next);
    }
    return l;
}

CoveringSystem load_covering_system(std::istream& in) {
    std::vector<CoveringEntry> entries;
    std::vector<std::size_t> lines;
    for (const auto& rec : read_records(in, 3, 3, "covering file")) {
        entries.push_back({rec.fields[0], rec.fields[1], rec.fields[2]});
        lines.push_back(rec.line);
        try {
            CoveringSystem probe(entries);
        } catch (const DomainError& e) {
            throw FormatError(rec.line, std::string("covering file: ") + e.what());
        }
    }
    if (entries.empty()) throw FormatError(0, "covering file: no entries");
    return CoveringSystem(std::move(entries));
}

CoveringCheck verify_covering(const CoveringSystem& system, u64 max_lcm) {
    CoveringCheck out;
    out.lcm = system.lcm();
    if (out.lcm > max_lcm)
        throw CapacityError("verify_covering: lcm " + std::to_string(out.lcm) + " exceeds the exhaustive limit " +
                            std::to_string(max_lcm));
    std::vector<bool> hit(out.lcm, false);
    for (const auto& e : system.entries())
        for (u64 k = e.r; k < out.lcm; k += e.m) hit[k] = true;
    const auto gap = std::find(hit.begin(), hit.end(), false);
    out.covered = gap == hit.end();
    if (!out.covered) out.first_uncovered = static_cast<u64>(gap - hit.begin());
    return out;
}

bool order_divides(u64 p, u64 m) {
    if (p < 3 || p % 2 == 0) throw DomainError("order_divides: p must be an odd prime");
    if (m == 0) throw DomainError("order_divides: m must be >= 1");
    return powmod(2, m, p) == 1;
}

ResidueClass build_class(const CoveringSystem& system) {
    const auto cover = verify_covering(system);
    if (!cover.covered)
        throw DomainError("build_class: system does not cover residue " + std::to_string(*cover.first_uncovered) +
                          " mod " + std::to_string(cover.lcm));
    std::vector<Congruence> parts{{1, 2}};
    for (const auto& e : system.entries()) {
        if (!order_divides(e.p, e.m))
            throw DomainError("build_class: " + std::to_string(e.p) + " does not divide 2^" + std::to_string(e.m) +
                              " - 1");
        parts.push_back({powmod(2, e.r, e.p), e.p});
    }
    const auto c = crt_combine(parts);
    return {c.residue, c.modulus};
}

ClassScan verify_class(const ResidueClass& cls, u64 limit, std::size_t exception_cap) {
    if (cls.M == 0 || cls.r >= cls.M || cls.r % 2 == 0 || cls.M % 2 != 0)
        throw DomainError("verify_class: class needs 0 <= r < M, r odd, M even");
    if (limit >= kMaxRange) throw DomainError("verify_class: limit must be < 2^63");
    ClassScan out;
    out.limit = limit;
    if (limit < cls.r) return out;

    const u64 members = (limit - cls.r) / cls.M + 1;
    out.members_checked = members;
    const i64 nchunks = static_cast<i64>(chunk_count(0, members, 1024));
    std::vector<std::vector<ClassMember>> found(static_cast<std::size_t>(nchunks));
    auto prime = [](u64 v) { return is_prime(v); };
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < nchunks; ++c) {
        const u64 b = static_cast<u64>(c) * 1024;
        const u64 e = std::min(members, b + 1024);
        for (u64 j = b; j < e; ++j) {
            const u64 n = cls.r + j * cls.M;
            const u64 f = detail::pow2_shift_count(n, prime);
            if (n <= cls.M || f > 0) found[static_cast<std::size_t>(c)].push_back({n, f});
        }
    }
    for (const auto& part : found)
        for (const auto& m : part) {
            if (m.n <= cls.M) {
                out.small_members.push_back(m);
            } else {
                out.holds = false;
                if (out.exceptions.size() < exception_cap) out.exceptions.push_back(m);
            }
        }
    out.members_above_modulus = members - out.small_members.size();
    return out;
}

} // namespace romanov
