#pragma once

#include <algorithm>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace romanov {

// Scans split [lo, hi) into fixed-size chunks so that the partition, and
// therefore every floating-point reduction order, is independent of the
// thread count.
inline constexpr std::uint64_t kScanChunk = 1ull << 16;

inline std::uint64_t chunk_count(std::uint64_t lo, std::uint64_t hi,
                                 std::uint64_t chunk = kScanChunk) {
    return hi > lo ? (hi - lo + chunk - 1) / chunk : 0;
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace romanov
