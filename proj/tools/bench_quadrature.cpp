// Quadrature benchmark.  The same source is built twice: once against the
// OpenMP kernels (bench_quadrature) and once against the serial reference
// library (bench_quadrature_serial).  Totals must agree bit-for-bit — the
// parallel kernels reduce in a fixed index order — so diffing the "total ="
// lines of the two binaries checks determinism while the timings compare
// throughput.  HAMLOOP_THREADS caps the parallel build.
#include <chrono>
#include <cstdio>

#include "hamloop/invariant.hpp"
#include "hamloop/scenarios/hirzebruch.hpp"

int main() {
    using namespace hamloop;
    using clock = std::chrono::steady_clock;

    const auto sc = scenarios::make_hirzebruch({1, 3, 1}, 0.025);
    const geom::QuadratureSpec spec{8, 1024, 12, 1};

    for (const auto* inputs : {&sc.psi, &sc.psi_tilde}) {
        const auto t0 = clock::now();
        const auto rep = invariant::compute_invariant(*inputs, spec);
        const double ms =
            std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - t0).count() /
            1000.0;
        std::printf("total = %.17g\n", rep.total);
        std::printf("time: %.1f ms\n", ms);
    }
    return 0;
}
