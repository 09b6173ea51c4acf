#include "romanov/admissible.hpp"

#include "romanov/errors.hpp"
#include "romanov/parallel.hpp"
#include "romanov/text_input.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace romanov {

LinearFunction::LinearFunction(u64 u, u64 v) : u_(u), v_(v) {
    if (u == 0) throw DomainError("LinearFunction: u must be >= 1");
    if (gcd(u, v) != 1)
        throw DomainError("LinearFunction: gcd(" + std::to_string(u) + ", " + std::to_string(v) + ") != 1");
}

u64 LinearFunction::operator()(u64 n) const {
    const u128 value = static_cast<u128>(u_) * n + v_;
    if (value >= kMaxRange)
        throw OverflowError("linear function " + std::to_string(u_) + "n+" + std::to_string(v_) +
                            " exceeds 2^63 at n = " + std::to_string(n));
    return static_cast<u64>(value);
}

std::vector<LinearFunction> load_functions(std::istream& in) {
    std::vector<LinearFunction> out;
    for (const auto& rec : read_records(in, 2, 2, "function file")) {
        try {
            out.emplace_back(rec.fields[0], rec.fields[1]);
        } catch (const DomainError& e) {
            throw FormatError(rec.line, std::string("function file: ") + e.what());
        }
    }
    return out;
}

namespace {

void require_family(const char* who, std::span<const LinearFunction> funcs) {
    if (funcs.empty()) throw DomainError(std::string(who) + ": empty function set");
    std::set<LinearFunction> seen;
    for (std::size_t i = 0; i < funcs.size(); ++i)
        if (!seen.insert(funcs[i]).second)
            throw DomainError(std::string(who) + ": duplicate function " + std::to_string(funcs[i].u()) + "n+" +
                              std::to_string(funcs[i].v()) + " at index " + std::to_string(i));
}

u64 next_prime(u64 p) {
    do ++p;
    while (!is_prime(p));
    return p;
}

} // namespace

std::optional<u64> witness_for_prime(std::span<const LinearFunction> funcs, u64 p) {
    std::vector<u64> us, vs;
    us.reserve(funcs.size());
    vs.reserve(funcs.size());
    for (const auto& f : funcs) {
        us.push_back(f.u() % p);
        vs.push_back(f.v() % p);
    }
    for (u64 m = 0; m < p; ++m) {
        bool ok = true;
        for (std::size_t i = 0; i < us.size() && ok; ++i) ok = (mulmod(us[i], m, p) + vs[i]) % p != 0;
        if (ok) return m;
    }
    return std::nullopt;
}

AdmissibilityResult is_admissible(std::span<const LinearFunction> funcs) {
    require_family("is_admissible", funcs);
    AdmissibilityResult result;
    const u64 k = funcs.size();
    for (u64 p : primes_up_to(k)) {
        auto m = witness_for_prime(funcs, p);
        if (!m) {
            result.failing_prime = p;
            return result;
        }
        result.certificate.witnesses.push_back({p, *m});
    }
    result.certificate.covers_up_to = k;
    // Spot checks above k: the next three primes and the largest prime <= 10k.
    u64 p = k;
    for (int i = 0; i < 3; ++i) {
        p = next_prime(p);
        if (auto m = witness_for_prime(funcs, p)) result.certificate.spot_checks.push_back({p, *m});
    }
    u64 top = 10 * k;
    while (top > p && !is_prime(top)) --top;
    if (top > p)
        if (auto m = witness_for_prime(funcs, top)) result.certificate.spot_checks.push_back({top, *m});
    result.admissible = true;
    return result;
}

bool certificate_holds(std::span<const LinearFunction> funcs, const AdmissibilityCertificate& cert) {
    auto holds = [&](const PrimeWitness& w) {
        if (!is_prime(w.p) || w.m >= w.p) return false;
        for (const auto& f : funcs)
            if ((mulmod(f.u() % w.p, w.m, w.p) + f.v() % w.p) % w.p == 0) return false;
        return true;
    };
    std::vector<u64> need = primes_up_to(cert.covers_up_to);
    if (cert.covers_up_to < funcs.size()) return false;
    for (u64 p : need) {
        auto it = std::find_if(cert.witnesses.begin(), cert.witnesses.end(),
                               [&](const PrimeWitness& w) { return w.p == p; });
        if (it == cert.witnesses.end() || !holds(*it)) return false;
    }
    return std::all_of(cert.spot_checks.begin(), cert.spot_checks.end(), holds);
}

Cd1Trace cd1_bound_recurrence(u64 s) {
    Cd1Trace trace;
    trace.bound_sequence.push_back(s);
    u64 p = 2;
    for (;;) {
        const u64 prev = trace.bound_sequence.back();
        trace.bound_sequence.push_back(prev - prev / p);
        trace.bound_prime = p;
        p = next_prime(p);
        if (trace.bound_sequence.back() < p) break;
    }
    return trace;
}

Cd1Result cd1_extract(std::span<const LinearFunction> funcs) {
    if (funcs.size() < 5)
        throw DomainError("cd1_extract: needs s >= 5 distinct functions, got " + std::to_string(funcs.size()));
    require_family("cd1_extract", funcs);

    Cd1Result result;
    result.trace = cd1_bound_recurrence(funcs.size());
    std::vector<std::size_t> alive(funcs.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

    for (u64 p = 2;; p = next_prime(p)) {
        std::vector<u64> cls(alive.size());
        Cd1Step step;
        step.p = p;
        for (std::size_t j = 0; j < alive.size(); ++j) {
            const auto& f = funcs[alive[j]];
            const u64 up = f.u() % p, vp = f.v() % p;
            cls[j] = up == 0 ? vp : mulmod(mod_inverse(static_cast<i64>(up), p), vp, p);
            ++step.class_sizes[cls[j]];
        }
        // Least-populated class, smallest residue on ties; an empty class wins.
        u64 best_r = 0, best_n = alive.size() + 1;
        for (u64 r = 0; r < p; ++r) {
            auto it = step.class_sizes.find(r);
            const u64 n = it == step.class_sizes.end() ? 0 : it->second;
            if (n < best_n) {
                best_n = n;
                best_r = r;
                if (n == 0) break;
            }
        }
        step.dropped_residue = best_r;
        step.dropped_count = best_n;
        std::vector<std::size_t> kept;
        kept.reserve(alive.size());
        for (std::size_t j = 0; j < alive.size(); ++j)
            if (cls[j] != best_r) kept.push_back(alive[j]);
        alive = std::move(kept);
        step.kept_count = alive.size();
        const std::size_t j = result.trace.steps.size() + 1;
        if (step.kept_count < result.trace.bound_at(j))
            throw InvariantError("cd1_extract: kept count fell below the recurrence bound");
        result.trace.steps.push_back(std::move(step));
        if (alive.size() < next_prime(p)) break;
    }

    result.survivors = std::move(alive);
    std::vector<LinearFunction> subset;
    for (std::size_t i : result.survivors) subset.push_back(funcs[i]);
    auto check = is_admissible(subset);
    if (!check.admissible) throw InvariantError("cd1_extract: survivors are not admissible");
    result.certificate = std::move(check.certificate);
    return result;
}

ShiftedSystem shifted_system(const SequencePair& seq, double x, double alpha) {
    if (!(alpha > 0.0 && alpha < 0.25)) throw DomainError("shifted_system: alpha must lie in (0, 1/4)");
    if (seq.empty()) throw DomainError("shifted_system: empty sequence");
    if (!(x > std::exp(1.0))) throw DomainError("shifted_system: x must exceed e");
    ShiftedSystem out;
    const double loglog = std::log(std::log(x));
    out.log_X = (std::log(x) + std::log(loglog)) / alpha;
    out.X = std::exp(out.log_X);
    out.k_real = 0.9 * std::pow(alpha, alpha) * std::pow(out.log_X, alpha);
    out.k = static_cast<u64>(std::floor(out.k_real));
    if (out.k < 1) throw DomainError("shifted_system: x too small, k = 0");
    const std::size_t count = std::min<std::size_t>(out.k, seq.size());
    const u64 at = seq.a().back();
    for (std::size_t i = 0; i < count; ++i) {
        const u128 shifted = static_cast<u128>(seq.l()[i]) * at;
        if (shifted >= kMaxRange) throw OverflowError("shifted_system: l_i * a_t exceeds 2^63");
        out.funcs.emplace_back(seq.l()[i], static_cast<u64>(shifted) - seq.a()[i]);
    }
    return out;
}

u64 cluster_count(std::span<const LinearFunction> funcs, u64 n) {
    u64 c = 0;
    for (const auto& f : funcs) c += is_prime(f(n)) ? 1 : 0;
    return c;
}

ClusterScanResult cluster_scan(std::span<const LinearFunction> funcs, u64 x, u64 threshold,
                               std::size_t witness_cap) {
    if (x == 0) throw DomainError("cluster_scan: x must be >= 1");
    if (x >= kMaxRange / 2) throw OverflowError("cluster_scan: 2x exceeds 2^63");
    u64 top = 0;
    for (const auto& f : funcs) top = std::max(top, f(2 * x - 1));  // throws on overflow

    ClusterScanResult out{x, threshold, 0, {}};
    const PrimeOracle prime(top + 1);
    const i64 nchunks = static_cast<i64>(chunk_count(x, 2 * x));
    std::vector<u64> counts(static_cast<std::size_t>(nchunks), 0);
    std::vector<std::vector<u64>> wits(static_cast<std::size_t>(nchunks));
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < nchunks; ++c) {
        const u64 b = x + static_cast<u64>(c) * kScanChunk;
        const u64 e = std::min(2 * x, b + kScanChunk);
        auto& w = wits[static_cast<std::size_t>(c)];
        u64 local = 0;
        for (u64 n = b; n < e; ++n) {
            u64 hits = 0;
            for (const auto& f : funcs) hits += prime(f.u() * n + f.v()) ? 1 : 0;
            if (hits >= threshold) {
                ++local;
                if (w.size() < witness_cap) w.push_back(n);
            }
        }
        counts[static_cast<std::size_t>(c)] = local;
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        out.count += counts[c];
        for (u64 n : wits[c])
            if (out.witnesses.size() < witness_cap) out.witnesses.push_back(n);
    }
    return out;
}

} // namespace romanov
