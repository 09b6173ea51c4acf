#include "romanov/beatty.hpp"

#include "romanov/errors.hpp"
#include "romanov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace romanov {

namespace {
// Runs body(c) for c in [0, n) with exceptions from worker threads rethrown on
// the calling thread.
template <class Body>
void guarded_parallel_for(i64 n, Body&& body) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < n; ++c) {
        try {
            body(c);
        } catch (...) {
#pragma omp critical(romanov_beatty_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

} // namespace

BeattyParams::BeattyParams(QuadraticIrrational beta, Rational gamma) : beta_(beta), gamma_(gamma) {
    const QuadSurd b = beta_.value();
    if (!(b > QuadSurd(1, 0, 1, b.D()))) throw DomainError("Beatty slope must exceed 1, got " + to_string(beta_));
    if (gamma_.num < 0) throw DomainError("Beatty offset gamma must be >= 0");
    if (!(b > QuadSurd(gamma_.num, 0, gamma_.den, b.D()))) throw DomainError("Beatty offset gamma must be < beta");
    A_ = exact::mul(beta_.P(), gamma_.den);
    B_ = gamma_.den;
    C_ = exact::mul(gamma_.num, beta_.Q());
    E_ = exact::mul(beta_.Q(), gamma_.den);
    if (E_ < 0) {
        A_ = -A_;
        B_ = -B_;
        C_ = -C_;
        E_ = -E_;
    }
}

i64 BeattyParams::term(u64 k) const {
    const i128 kk = static_cast<i128>(k);
    const i128 num = exact::add(exact::add(exact::mul(A_, kk), C_), exact::floor_sqrt_multiple(exact::mul(B_, kk), beta_.D()));
    const i128 t = exact::floor_div(num, E_);
    if (t > std::numeric_limits<i64>::max() || t < std::numeric_limits<i64>::min())
        throw PrecisionError("Beatty term exceeds 64 bits at k = " + std::to_string(k));
    return static_cast<i64>(t);
}

// ---------------------------------------------------------------------------

BestApproxCheck best_approx_check(const ContinuedFraction& cf, const QuadraticIrrational& beta) {
    BestApproxCheck out;
    if (cf.convergents.empty()) return out;
    const u64 top = static_cast<u64>(cf.convergents.back().q);
    // running[q] = min_{q' <= q} ||q' beta||, kept only as the current value
    std::optional<QuadSurd> running;
    std::size_t next = 0;
    for (u64 q = 1; q <= top; ++q) {
        const QuadSurd d = nearest_int_dist(beta, q).distance;
        if (!running || d < *running) running = d;
        while (next < cf.convergents.size() && static_cast<u64>(cf.convergents[next].q) == q) {
            // ||q_n beta|| must equal the running minimum over [1, q_n]
            if (*running < d && !out.violation) {
                out.holds = false;
                // locate the first q attaining a smaller distance
                for (u64 r = 1; r < q; ++r)
                    if (nearest_int_dist(beta, r).distance < d) {
                        out.violation = std::pair{next, r};
                        break;
                    }
            }
            ++next;
        }
    }
    return out;
}

TypeBound type_bound_check(const QuadraticIrrational& beta, u64 Q) {
    if (Q == 0) throw DomainError("type_bound_check: Q must be >= 1");
    const auto cf = cf_expand_until(beta, Q);
    const i64 K = cf.max_partial_quotient();

    const i64 nchunks = static_cast<i64>(chunk_count(1, Q + 1, 4096));
    std::vector<std::optional<std::pair<QuadSurd, u64>>> best(static_cast<std::size_t>(nchunks));
    guarded_parallel_for(nchunks, [&](i64 c) {
        const u64 b = 1 + static_cast<u64>(c) * 4096;
        const u64 e = std::min(Q + 1, b + 4096);
        auto& slot = best[static_cast<std::size_t>(c)];
        for (u64 q = b; q < e; ++q) {
            const QuadSurd v = nearest_int_dist(beta, q).distance.scaled(static_cast<i128>(q));
            if (!slot || v < slot->first) slot = std::pair{v, q};
        }
    });
    std::optional<std::pair<QuadSurd, u64>> overall;
    for (const auto& slot : best)
        if (slot && (!overall || slot->first < overall->first)) overall = slot;

    TypeBound out{overall->first, overall->second, K, Rational(1, (K + 1) * (K + 2)), false};
    out.holds = (out.min_value <=> out.bound) >= 0;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

double normalized_error(u64 count, u64 x, u64 d) {
    const double main = static_cast<double>(x) / static_cast<double>(d);
    const double diff = std::abs(static_cast<double>(count) - main);
    const double lx = std::log(static_cast<double>(x));
    const double scale = static_cast<double>(d) * lx * lx * lx;
    if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / scale;
}

} // namespace

std::vector<std::vector<ApCount>> beatty_count_ap_all(const BeattyParams& params, u64 x,
                                                      std::span<const u64> moduli) {
    for (u64 d : moduli)
        if (d < 2) throw DomainError("beatty_count_ap: modulus d must be >= 2");
    std::vector<std::size_t> offset(moduli.size() + 1, 0);
    for (std::size_t i = 0; i < moduli.size(); ++i) offset[i + 1] = offset[i] + moduli[i];

    const i64 nchunks = static_cast<i64>(chunk_count(1, x + 1));
    std::vector<std::vector<u64>> hist(static_cast<std::size_t>(nchunks));
    guarded_parallel_for(nchunks, [&](i64 c) {
        const u64 b = 1 + static_cast<u64>(c) * kScanChunk;
        const u64 e = std::min(x + 1, b + kScanChunk);
        auto& h = hist[static_cast<std::size_t>(c)];
        h.assign(offset.back(), 0);
        for (u64 n = b; n < e; ++n) {
            const i64 t = params.term(n);
            for (std::size_t i = 0; i < moduli.size(); ++i) {
                const i64 d = static_cast<i64>(moduli[i]);
                ++h[offset[i] + static_cast<std::size_t>(((t % d) + d) % d)];
            }
        }
    });
    std::vector<std::vector<ApCount>> out(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        for (u64 a = 0; a < moduli[i]; ++a) {
            ApCount r;
            r.a = a;
            for (const auto& h : hist) r.count += h[offset[i] + a];
            r.main_term = static_cast<double>(x) / static_cast<double>(moduli[i]);
            r.normalized_error = normalized_error(r.count, x, moduli[i]);
            out[i].push_back(r);
        }
    }
    return out;
}

ApCount beatty_count_ap(const BeattyParams& params, u64 x, u64 d, u64 a) {
    if (d < 2) throw DomainError("beatty_count_ap: modulus d must be >= 2");
    if (a >= d) throw DomainError("beatty_count_ap: residue must satisfy 0 <= a < d");
    const u64 mod[1] = {d};
    return beatty_count_ap_all(params, x, mod)[0][a];
}

// ---------------------------------------------------------------------------

namespace {

constexpr u64 kLambdaTableLimit = 1ull << 27;

// Lambda(n) for 0 <= n < hi.
std::vector<double> lambda_table(u64 hi) {
    if (hi > kLambdaTableLimit)
        throw CapacityError("lambda table of " + std::to_string(hi) + " entries exceeds the limit " +
                            std::to_string(kLambdaTableLimit));
    std::vector<double> lam(hi, 0.0);
    const PrimeTable primes = PrimeTable::build(0, hi);
    primes.for_each_prime(0, hi, [&](u64 p) {
        const double lp = std::log(static_cast<double>(p));
        for (u64 pk = p; pk < hi; pk *= p) {
            lam[pk] = lp;
            if (pk > (hi - 1) / p) break;
        }
    });
    return lam;
}

} // namespace

LambdaSum lambda_sum_beatty(const BeattyParams& params, u64 N, u64 q1, u64 a1, u64 q2, u64 a2) {
    if (N == 0) throw DomainError("lambda_sum_beatty: N must be >= 1");
    if (q1 == 0 || q2 == 0) throw DomainError("lambda_sum_beatty: moduli q1, q2 must be >= 1");
    if (a1 > q1) throw DomainError("lambda_sum_beatty: need 0 <= a1 <= q1");
    if (a2 > q2) throw DomainError("lambda_sum_beatty: need 0 <= a2 <= q2");
    if (gcd(a2, q2) != 1) throw DomainError("lambda_sum_beatty: condition (a2, q2) = 1 fails");
    if (gcd(q2 * a1 + a2, q1) != 1) throw DomainError("lambda_sum_beatty: condition (q2*a1 + a2, q1) = 1 fails");

    LambdaSum out;
    out.M = params.term(N);
    const u128 top = static_cast<u128>(q2) * static_cast<u64>(out.M) + a2;
    if (top >= kLambdaTableLimit) throw CapacityError("lambda_sum_beatty: q2*M + a2 too large for the table");
    const auto lam = lambda_table(static_cast<u64>(top) + 1);
    const u64 r1 = a1 % q1;

    const i64 s_chunks = static_cast<i64>(chunk_count(1, N + 1));
    std::vector<NeumaierSum> s_parts(static_cast<std::size_t>(s_chunks));
    guarded_parallel_for(s_chunks, [&](i64 c) {
        const u64 b = 1 + static_cast<u64>(c) * kScanChunk;
        const u64 e = std::min(N + 1, b + kScanChunk);
        NeumaierSum acc;
        for (u64 n = b; n < e; ++n) {
            const u64 m = static_cast<u64>(params.term(n));
            if (m % q1 == r1) acc.add(lam[q2 * m + a2]);
        }
        s_parts[static_cast<std::size_t>(c)] = acc;
    });

    const u64 M = static_cast<u64>(out.M);
    const i64 t_chunks = static_cast<i64>(chunk_count(1, M + 1));
    std::vector<NeumaierSum> t_parts(static_cast<std::size_t>(t_chunks));
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 0; c < t_chunks; ++c) {
        const u64 b = 1 + static_cast<u64>(c) * kScanChunk;
        const u64 e = std::min(M + 1, b + kScanChunk);
        NeumaierSum acc;
        for (u64 m = b; m < e; ++m)
            if (m % q1 == r1) acc.add(lam[q2 * m + a2]);
        t_parts[static_cast<std::size_t>(c)] = acc;
    }

    NeumaierSum S, T;
    for (const auto& p : s_parts) S.merge(p);
    for (const auto& p : t_parts) T.merge(p);
    out.S = S.value();
    out.T = T.value() / params.beta().to_double();
    out.deviation = std::abs(out.S - out.T) / std::max(out.T, 1.0);
    return out;
}

// ---------------------------------------------------------------------------

BeattyRecord beatty_record_search(const SequencePair& seq, const BeattyParams& params, u64 k_max) {
    if (k_max == 0) throw DomainError("beatty_record_search: k_max must be >= 1");
    const i64 nchunks = static_cast<i64>(chunk_count(1, k_max + 1, 4096));
    std::vector<BeattyRecord> best(static_cast<std::size_t>(nchunks));
    guarded_parallel_for(nchunks, [&](i64 c) {
        const u64 b = 1 + static_cast<u64>(c) * 4096;
        const u64 e = std::min(k_max + 1, b + 4096);
        BeattyRecord local{b, static_cast<u64>(params.term(b)), 0};
        local.f = f_general(seq, local.n);
        for (u64 k = b + 1; k < e; ++k) {
            const u64 n = static_cast<u64>(params.term(k));
            const u64 f = f_general(seq, n);
            if (f > local.f) local = {k, n, f};
        }
        best[static_cast<std::size_t>(c)] = local;
    });
    BeattyRecord out = best.front();
    for (const auto& r : best)
        if (r.f > out.f) out = r;
    return out;
}

} // namespace romanov
