#pragma once

// Admissible sets of linear functions u*n + v, the greedy residue-class
// extraction that pulls an admissible subset out of an arbitrary family, the
// shifted system l_i*n + (l_i*a_t - a_i), and prime-cluster scans.

#include "romanov/primes.hpp"
#include "romanov/representation.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace romanov {

class LinearFunction {
public:
    // u >= 1 and gcd(u, v) = 1, else DomainError.
    LinearFunction(u64 u, u64 v);

    u64 u() const noexcept { return u_; }
    u64 v() const noexcept { return v_; }

    // u*n + v; OverflowError when the value reaches 2^63.
    u64 operator()(u64 n) const;

    friend bool operator==(const LinearFunction&, const LinearFunction&) = default;
    friend auto operator<=>(const LinearFunction&, const LinearFunction&) = default;

private:
    u64 u_;
    u64 v_;
};

// One "u v" pair per line, '#' comments.
std::vector<LinearFunction> load_functions(std::istream& in);

struct PrimeWitness {
    u64 p = 0;
    u64 m = 0;  // residue with p not dividing prod(u_i*m + v_i)
    friend bool operator==(const PrimeWitness&, const PrimeWitness&) = default;
};

struct AdmissibilityCertificate {
    // Exhaustive witnesses for every prime p <= covers_up_to.
    std::vector<PrimeWitness> witnesses;
    u64 covers_up_to = 0;
    // Sample witnesses for primes above covers_up_to; for those primes at most
    // |funcs| residues are roots of the product, so a witness always exists.
    std::vector<PrimeWitness> spot_checks;
};

struct AdmissibilityResult {
    bool admissible = false;
    AdmissibilityCertificate certificate;
    std::optional<u64> failing_prime;  // least prime with every residue covered
};

// Smallest m in [0, p) with p not dividing prod(u_i*m + v_i), if any.
std::optional<u64> witness_for_prime(std::span<const LinearFunction> funcs, u64 p);

// Requires a nonempty family of pairwise distinct functions.
AdmissibilityResult is_admissible(std::span<const LinearFunction> funcs);

// Re-evaluates every witness directly.
bool certificate_holds(std::span<const LinearFunction> funcs, const AdmissibilityCertificate& cert);

struct Cd1Step {
    u64 p = 0;
    std::map<u64, u64> class_sizes;  // residue -> survivors in that class (nonempty classes only)
    u64 dropped_residue = 0;
    u64 dropped_count = 0;
    u64 kept_count = 0;
};

struct Cd1Trace {
    std::vector<Cd1Step> steps;
    // s_0 = s, s_j = s_{j-1} - floor(s_{j-1} / p_j), stopped at the least t
    // with s_t < p_{t+1}.
    std::vector<u64> bound_sequence;
    u64 bound_prime = 0;  // p_t for that t

    u64 s_t() const { return bound_sequence.back(); }
    // s_j for any j; the recurrence is constant after t.
    u64 bound_at(std::size_t j) const {
        return j < bound_sequence.size() ? bound_sequence[j] : bound_sequence.back();
    }
};

// The exact lower-bound recurrence and its stopping prime, from s alone.
Cd1Trace cd1_bound_recurrence(u64 s);

struct Cd1Result {
    std::vector<std::size_t> survivors;  // input indices, increasing
    AdmissibilityCertificate certificate;
    Cd1Trace trace;
};

// At the j-th prime, reduce each surviving u_i*n + v_i to the class of
// u_i^{-1} v_i (or v_i when p | u_i), drop a least-populated class (ties to
// the smallest residue), and stop once the survivors number fewer than the
// next prime. Needs at least 5 distinct functions.
Cd1Result cd1_extract(std::span<const LinearFunction> funcs);

struct ShiftedSystem {
    double X = 0.0;       // (x log log x)^(1/alpha); may be +inf
    double log_X = 0.0;
    double k_real = 0.0;  // 0.9 alpha^alpha (log X)^alpha
    u64 k = 0;            // floor(k_real)
    std::vector<LinearFunction> funcs;  // l_i n + (l_i a_t - a_i), i <= min(k, t)
};

// 0 < alpha < 1/4 and x large enough for k >= 1.
ShiftedSystem shifted_system(const SequencePair& seq, double x, double alpha);

// #{i : u_i n + v_i prime}
u64 cluster_count(std::span<const LinearFunction> funcs, u64 n);

inline constexpr std::size_t kWitnessCap = 100;

struct ClusterScanResult {
    u64 x = 0;
    u64 threshold = 0;
    u64 count = 0;               // n in [x, 2x) with cluster_count >= threshold
    std::vector<u64> witnesses;  // the first such n, at most the cap
};

ClusterScanResult cluster_scan(std::span<const LinearFunction> funcs, u64 x, u64 threshold,
                               std::size_t witness_cap = kWitnessCap);

} // namespace romanov
