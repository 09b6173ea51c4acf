// Parallel kernels against the serial reference implementations.

#include "romanov/admissible.hpp"
#include "romanov/beatty.hpp"
#include "romanov/covering.hpp"
#include "romanov/distribution.hpp"
#include "romanov/parallel.hpp"
#include "romanov/primes.hpp"
#include "romanov/reference.hpp"
#include "romanov/representation.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace romanov;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class P, class R>
void row(const char* name, P&& parallel, R&& serial) {
    const double tp = seconds(parallel);
    const double ts = seconds(serial);
    std::printf("%-22s %10.3f %10.3f %8.2fx\n", name, tp, ts, tp > 0 ? ts / tp : 0.0);
    std::fflush(stdout);
}

volatile u64 sink = 0;
volatile double fsink = 0;

} // namespace

int main(int argc, char** argv) {
    const u64 scale = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
    const u64 x = 2'000'000 * scale;
    std::printf("threads %d, x = %llu\n", max_threads(), static_cast<unsigned long long>(x));
    std::printf("%-22s %10s %10s %9s\n", "kernel", "parallel", "serial", "speedup");

    row("sieve", [&] { sink = PrimeTable::build(0, 10 * x).count(); },
        [&] { sink = reference::sieve(10 * x).size(); });
    row("count_primes", [&] { sink = count_primes(10 * x, 7, 3).count; },
        [&] { sink = reference::count_primes(10 * x, 7, 3); });
    row("chebyshev_psi", [&] { fsink = chebyshev_psi(10 * x); }, [&] { fsink = reference::chebyshev_psi(10 * x); });

    const u64 cps[] = {x / 10, x};
    row("density_scan", [&] { sink = density_scan(x, cps).checkpoints.back().representable; },
        [&] { sink = reference::density_scan(x, cps).checkpoints.back().representable; });
    row("champions", [&] { sink = champions(x).size(); }, [&] { sink = reference::champions(x).size(); });

    const std::vector<LinearFunction> fns{{1, 0}, {1, 2}, {1, 6}, {1, 8}};
    row("cluster_scan", [&] { sink = cluster_scan(fns, x, 3).count; },
        [&] { sink = reference::cluster_scan(fns, x, 3).count; });

    const auto cls = build_class(CoveringSystem::reference());
    row("verify_class", [&] { sink = verify_class(cls, 1000 * x).members_checked; },
        [&] { sink = reference::verify_class(cls, 1000 * x).members_checked; });

    const BeattyParams beatty(QuadraticIrrational::sqrt(2), {0, 1});
    const u64 moduli[] = {7};
    row("beatty_count_ap", [&] { sink = beatty_count_ap_all(beatty, x, moduli)[0][0].count; },
        [&] { sink = reference::beatty_counts(beatty, x, 7)[0]; });
    row("lambda_sum_beatty", [&] { fsink = lambda_sum_beatty(beatty, x, 2, 1, 3, 2).S; },
        [&] { fsink = reference::lambda_sum_beatty(beatty, x, 2, 1, 3, 2).S; });

    const std::vector<LinearFunction> integers{{1, 0}};
    row("hyp1_evaluate", [&] { fsink = hyp1_evaluate(x / 4, {1, 3}, integers).cond3; },
        [&] { fsink = reference::hyp1_evaluate(x / 4, {1, 3}, integers).cond3; });
    row("window_counts", [&] { sink = window_counts(3, 1, x, 200, 6).threshold_hits; },
        [&] { sink = reference::window_counts(3, 1, x, 200).size(); });
    return 0;
}
