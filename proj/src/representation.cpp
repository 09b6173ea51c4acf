#include "romanov/representation.hpp"

#include "romanov/errors.hpp"
#include "romanov/parallel.hpp"
#include "romanov/text_input.hpp"

#include <algorithm>
#include <string>

namespace romanov {

SequencePair::SequencePair(std::vector<u64> a, std::vector<u64> l) : a_(std::move(a)), l_(std::move(l)) {
    if (a_.size() != l_.size())
        throw DomainError("SequencePair: a has " + std::to_string(a_.size()) + " entries, l has " +
                          std::to_string(l_.size()));
    for (std::size_t i = 0; i < a_.size(); ++i) {
        const std::string at = " at index " + std::to_string(i);
        if (a_[i] == 0) throw DomainError("SequencePair: a must be positive" + at);
        if (l_[i] == 0) throw DomainError("SequencePair: l must be positive" + at);
        if (i > 0 && a_[i] <= a_[i - 1]) throw DomainError("SequencePair: a not strictly increasing" + at);
        if (gcd(a_[i], l_[i]) != 1) throw DomainError("SequencePair: gcd(l, a) != 1" + at);
    }
}

SequencePair SequencePair::powers_of_two(unsigned count) {
    if (count > 62) throw DomainError("powers_of_two: at most 62 terms fit below 2^63");
    std::vector<u64> a(count), l(count, 1);
    for (unsigned i = 0; i < count; ++i) a[i] = u64{1} << (i + 1);
    return SequencePair(std::move(a), std::move(l));
}

std::size_t SequencePair::prefix_count(u64 x) const noexcept {
    return static_cast<std::size_t>(std::upper_bound(a_.begin(), a_.end(), x) - a_.begin());
}

SequencePair load_sequence_pair(std::istream& in) {
    std::vector<u64> a, l;
    for (const auto& rec : read_records(in, 1, 2, "sequence file")) {
        const u64 ai = rec.fields[0];
        const u64 li = rec.fields.size() > 1 ? rec.fields[1] : 1;
        if (ai == 0) throw FormatError(rec.line, "sequence file: a must be positive");
        if (li == 0) throw FormatError(rec.line, "sequence file: l must be positive");
        if (!a.empty() && ai <= a.back())
            throw FormatError(rec.line, "sequence file: a = " + std::to_string(ai) +
                                            " does not increase (previous " + std::to_string(a.back()) + ")");
        if (gcd(ai, li) != 1)
            throw FormatError(rec.line, "sequence file: gcd(" + std::to_string(li) + ", " + std::to_string(ai) +
                                            ") = " + std::to_string(gcd(ai, li)) + " != 1");
        a.push_back(ai);
        l.push_back(li);
    }
    return SequencePair(std::move(a), std::move(l));
}

u64 f_pow2(u64 n) {
    if (n == 0) throw DomainError("f_pow2: n must be >= 1");
    return detail::pow2_shift_count(n, [](u64 m) { return is_prime(m); });
}

u64 f_general(const SequencePair& seq, u64 n) {
    if (n == 0) throw DomainError("f_general: n must be >= 1");
    const std::size_t upto = seq.prefix_count(n);
    u64 c = 0;
    for (std::size_t i = 0; i < upto; ++i) {
        const u128 v = static_cast<u128>(seq.l()[i]) * n;
        if (v >= kMaxRange)
            throw OverflowError("f_general: l_" + std::to_string(i + 1) + " * n exceeds 2^63 at n = " +
                                std::to_string(n));
        c += is_prime(static_cast<u64>(v) - seq.a()[i]) ? 1 : 0;
    }
    return c;
}

std::vector<u64> exceptional_integers(u64 limit) {
    if (limit >= kMaxRange) throw DomainError("exceptional_integers: limit must be < 2^63");
    if (limit < 4) return {};
    const PrimeOracle prime(limit + 1);
    const u64 lo = 3, hi = limit + 1;
    const i64 nchunks = static_cast<i64>(chunk_count(lo, hi));
    std::vector<std::vector<u64>> found(static_cast<std::size_t>(nchunks));
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < nchunks; ++c) {
        const u64 b = lo + static_cast<u64>(c) * kScanChunk;
        const u64 e = std::min(hi, b + kScanChunk);
        for (u64 n = b; n < e; ++n) {
            bool all = true;
            for (u64 shift = 2; shift < n && all; shift <<= 1) all = prime(n - shift);
            if (all) found[static_cast<std::size_t>(c)].push_back(n);
        }
    }
    std::vector<u64> out;
    for (auto& part : found) out.insert(out.end(), part.begin(), part.end());
    return out;
}

DensityReport density_scan(u64 limit, std::span<const u64> checkpoints) {
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw DomainError("density_scan: checkpoints must be ascending");
    if (!checkpoints.empty() && checkpoints.back() > limit)
        throw DomainError("density_scan: checkpoint " + std::to_string(checkpoints.back()) + " exceeds limit " +
                          std::to_string(limit));
    if (limit >= kMaxRange) throw DomainError("density_scan: limit must be < 2^63");
    DensityReport report;
    if (checkpoints.empty()) return report;

    const u64 top = checkpoints.back();
    const PrimeOracle prime(top + 1);
    const u64 lo = 3, hi = top + 1;
    const i64 nchunks = static_cast<i64>(chunk_count(lo, hi));
    const std::size_t nbuckets = checkpoints.size();
    // per_chunk[c][b]: representable odd n in chunk c with checkpoints[b-1] < n <= checkpoints[b]
    std::vector<std::vector<u64>> per_chunk(static_cast<std::size_t>(nchunks), std::vector<u64>(nbuckets, 0));
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < nchunks; ++c) {
        const u64 b = lo + static_cast<u64>(c) * kScanChunk;
        const u64 e = std::min(hi, b + kScanChunk);
        auto& counts = per_chunk[static_cast<std::size_t>(c)];
        std::size_t bucket = static_cast<std::size_t>(
            std::lower_bound(checkpoints.begin(), checkpoints.end(), b) - checkpoints.begin());
        for (u64 n = b | 1; n < e; n += 2) {
            while (checkpoints[bucket] < n) ++bucket;
            if (detail::any_pow2_shift_prime(n, prime)) ++counts[bucket];
        }
    }
    u64 running = 0;
    for (std::size_t k = 0; k < nbuckets; ++k) {
        for (const auto& counts : per_chunk) running += counts[k];
        DensityCheckpoint cp;
        cp.x = checkpoints[k];
        cp.odd_total = cp.x >= 3 ? (cp.x - 1) / 2 : 0;
        cp.representable = running;
        cp.ratio = cp.odd_total ? static_cast<double>(running) / static_cast<double>(cp.odd_total) : 0.0;
        report.checkpoints.push_back(cp);
    }
    return report;
}

std::vector<Champion> champions(u64 limit) {
    if (limit < 5) throw DomainError("champions: limit must be >= 5, got " + std::to_string(limit));
    if (limit >= kMaxRange) throw DomainError("champions: limit must be < 2^63");
    const PrimeOracle prime(limit + 1);
    const u64 lo = 1, hi = limit + 1;
    const i64 nchunks = static_cast<i64>(chunk_count(lo, hi));
    // A global record is a record within its own chunk, so chunk-local
    // record lists merged in order contain every global record.
    std::vector<std::vector<Champion>> local(static_cast<std::size_t>(nchunks));
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < nchunks; ++c) {
        const u64 b = lo + static_cast<u64>(c) * kScanChunk;
        const u64 e = std::min(hi, b + kScanChunk);
        u64 best = 0;
        for (u64 n = b | 1; n < e; n += 2) {
            const u64 f = detail::pow2_shift_count(n, prime);
            if (f > best) {
                best = f;
                local[static_cast<std::size_t>(c)].push_back({n, f});
            }
        }
    }
    std::vector<Champion> out;
    u64 best = 0;
    for (const auto& part : local)
        for (const auto& ch : part)
            if (ch.f > best) {
                best = ch.f;
                out.push_back(ch);
            }
    return out;
}

} // namespace romanov
