// Timing comparison of the hot kernels: serial reference vs OpenMP vs
// transform-based convolution, and serial vs OpenMP eigen matvec. The serial
// versions are the oracles the tests check against; this target shows what
// the parallel paths buy on the current machine.

#include "frontspread/field.hpp"
#include "frontspread/kernel.hpp"
#include "frontspread/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include <omp.h>

using namespace frontspread;

namespace {

template <typename F>
double time_ms(int reps, F &&fn) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r)
        fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

} // namespace

int main() {
    std::printf("threads: %d\n\n", omp_get_max_threads());

    {
        std::printf("convolution (n grid nodes, triangular kernel, sigma = 1)\n");
        std::printf("%8s %8s %12s %12s %12s %10s\n", "n", "dx", "serial[ms]", "omp[ms]",
                    "fft[ms]", "speedup");
        for (const auto &[half_width, dx] : {std::pair{40.0, 0.05}, std::pair{80.0, 0.02},
                                            std::pair{160.0, 0.01}}) {
            const Grid grid = Grid::symmetric(half_width, dx);
            const Kernel kernel = Kernel::triangular(1.0, dx);
            Convolver serial(grid, kernel, ConvPath::Serial);
            Convolver direct(grid, kernel, ConvPath::Direct);
            Convolver fft(grid, kernel, ConvPath::Fft);
            std::vector<double> u(static_cast<std::size_t>(grid.n));
            for (int i = 0; i < grid.n; ++i)
                u[static_cast<std::size_t>(i)] = std::exp(-0.1 * grid.x(i) * grid.x(i));
            std::vector<double> out(u.size());
            const int reps = std::max(3, 2000000 / grid.n);
            const double ts = time_ms(reps, [&] { serial.apply(u, out); });
            const double td = time_ms(reps, [&] { direct.apply(u, out); });
            const double tf = time_ms(reps, [&] { fft.apply(u, out); });
            std::printf("%8d %8.3f %12.4f %12.4f %12.4f %9.2fx\n", grid.n, dx, ts, td, tf,
                        ts / td);
        }
    }

    {
        std::printf("\neigen matvec (dense operator matrix)\n");
        std::printf("%8s %12s %12s %10s\n", "n", "serial[ms]", "omp[ms]", "speedup");
        for (int n : {256, 512, 1024}) {
            const Kernel kernel = Kernel::triangular(1.0, 0.05);
            const SpectralProblem problem =
                SpectralProblem::constant_theta(1.0, kernel, 0.0, 4.0, 0.5, n);
            const OperatorMatrix m = assemble(problem);
            std::vector<double> x(static_cast<std::size_t>(n), 1.0);
            std::vector<double> y(x.size());
            const int reps = std::max(5, 20000000 / (n * n));
            const double ts = time_ms(reps, [&] { matvec_serial(m, x, y); });
            const double tp = time_ms(reps, [&] { matvec_omp(m, x, y); });
            std::printf("%8d %12.4f %12.4f %9.2fx\n", n, ts, tp, ts / tp);
        }
    }
    return 0;
}
