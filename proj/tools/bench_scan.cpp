// Timing comparison of the serial and OpenMP exclusion-grid paths on a
// reduced grid. The two paths must produce identical cells; the benchmark
// asserts that before reporting the speedup.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coldkick/exclusion.hpp"
#include "coldkick/model.hpp"

using namespace coldkick;
using clock_type = std::chrono::steady_clock;

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 24;
    if (n < 2) n = 2;
#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif

    const Protocol protocol = default_protocol();
    const MeasurementBand band = MeasurementBand::normal(120e-6, 40e-6, 0.95);
    const auto lambda_axis = log_axis(1e-20, 1e-2, n);
    const auto rc_axis = log_axis(1e-9, 1e-3, n);
    // colored-noise cells run three adaptive quadratures each, which is the
    // expensive per-cell path worth parallelizing
    const NoiseModel family = Ccsl{0.0, 1e-7, 1e-3};

    const auto t0 = clock_type::now();
    const ExclusionGrid serial = scan_exclusion(protocol, family, lambda_axis, rc_axis, band, 1);
    const auto t1 = clock_type::now();
    const ExclusionGrid parallel =
        scan_exclusion(protocol, family, lambda_axis, rc_axis, band, threads);
    const auto t2 = clock_type::now();

    for (size_t i = 0; i < serial.cells.size(); ++i) {
        if (serial.cells[i].sigma_x != parallel.cells[i].sigma_x ||
            serial.cells[i].excluded != parallel.cells[i].excluded) {
            std::fprintf(stderr, "mismatch at cell %zu\n", i);
            return 1;
        }
    }

    const double serial_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double parallel_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    std::printf("grid %dx%d, %zu cells\n", n, n, serial.cells.size());
    std::printf("serial   : %10.2f ms\n", serial_ms);
    std::printf("openmp(%d): %9.2f ms\n", threads, parallel_ms);
    std::printf("speedup  : %10.2fx\n", serial_ms / parallel_ms);
    return 0;
}
