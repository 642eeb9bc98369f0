// Timing comparison between the serial reference implementations and the
// OpenMP paths, plus a bit-identity check: the parallel loops only distribute
// independent iterations, so the results must match the serial ones exactly.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "udw/earlytime.hpp"
#include "udw/kernels.hpp"
#include "udw/params.hpp"

using namespace udw;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

bool bits_equal(const std::vector<EarlyCovariance>& a, const std::vector<EarlyCovariance>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::memcmp(&a[i], &b[i], sizeof(EarlyCovariance)) != 0) return false;
    return true;
}

} // namespace

int main() {
    const PhysicalParams p = make_params(1.0, 5.0, 0.02, 2.0, 1000.0);
    const Geometry geom = half_space(2.0);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; both runs are serial\n");
#endif

    // Early-time covariance sweep: the heavy target, one delay-equation solve
    // per mode frequency, embarrassingly parallel across the mode grid.
    {
        std::vector<double> ts;
        for (int i = 0; i <= 24; ++i) ts.push_back(0.5 * double(i));

        double t0 = now();
        const auto serial = early_covariance_sweep(p, geom, ts, kFullOrder, false);
        const double t_serial = now() - t0;

        t0 = now();
        const auto parallel = early_covariance_sweep(p, geom, ts, kFullOrder, true);
        const double t_parallel = now() - t0;

        std::printf("early_covariance_sweep (25 times, full order):\n");
        std::printf("  serial   %8.3f s\n", t_serial);
        std::printf("  parallel %8.3f s   speedup %.2fx   bit-identical: %s\n", t_parallel,
                    t_serial / t_parallel, bits_equal(serial, parallel) ? "yes" : "NO");
        if (!bits_equal(serial, parallel)) return 1;
    }

    // FDT residual: cheap per point (quadrature of the damping kernel tail),
    // parallel across the frequency grid.
    {
        const std::vector<double> grid = default_fdt_grid(p, 400);

        double t0 = now();
        const double r_serial = fdt_residual(p, geom, grid, false);
        const double t_serial = now() - t0;

        t0 = now();
        const double r_parallel = fdt_residual(p, geom, grid, true);
        const double t_parallel = now() - t0;

        std::printf("fdt_residual (400-point grid, half space):\n");
        std::printf("  serial   %8.3f s   residual %.3e\n", t_serial, r_serial);
        std::printf("  parallel %8.3f s   speedup %.2fx   bit-identical: %s\n", t_parallel,
                    t_serial / t_parallel, r_serial == r_parallel ? "yes" : "NO");
        if (r_serial != r_parallel) return 1;
    }

    return 0;
}
