#pragma once

// Serial, unoptimized counterparts of the parallel scans. Plain loops over a
// Miller-Rabin test or a whole-range sieve; used by the tests as independent
// oracles and by the benchmark as the baseline.

#include "romanov/admissible.hpp"
#include "romanov/beatty.hpp"
#include "romanov/covering.hpp"
#include "romanov/distribution.hpp"
#include "romanov/representation.hpp"

#include <vector>

namespace romanov::reference {

// is_prime[n] for 0 <= n < hi, by the classic sieve.
std::vector<bool> sieve(u64 hi);

u64 count_primes(u64 x, u64 q = 1, u64 a = 0);
double chebyshev_psi(u64 x, u64 q = 1, u64 a = 0);

u64 f_pow2(u64 n);
std::vector<u64> exceptional_integers(u64 limit);
DensityReport density_scan(u64 limit, std::span<const u64> checkpoints);
std::vector<Champion> champions(u64 limit);

ClusterScanResult cluster_scan(std::span<const LinearFunction> funcs, u64 x, u64 threshold,
                               std::size_t witness_cap = kWitnessCap);
ClassScan verify_class(const ResidueClass& cls, u64 limit, std::size_t exception_cap = 100);

std::vector<u64> beatty_counts(const BeattyParams& params, u64 x, u64 d);
LambdaSum lambda_sum_beatty(const BeattyParams& params, u64 N, u64 q1, u64 a1, u64 q2, u64 a2);

std::vector<u64> window_counts(u64 q, u64 a, u64 x, u64 y);
Hyp1Report hyp1_evaluate(u64 x, const Rational& theta, std::span<const LinearFunction> fns, u64 B = 1);

} // namespace romanov::reference
