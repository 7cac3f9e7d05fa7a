#include "frontspread/field.hpp"

#include "frontspread/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace frontspread;

namespace {

std::vector<double> random_field(const Grid &grid, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> draw(0.0, 1.0);
    std::vector<double> u(static_cast<std::size_t>(grid.n));
    for (auto &v : u)
        v = draw(rng);
    return u;
}

} // namespace

TEST_CASE("grid layout and interpolation") {
    const Grid grid = Grid::symmetric(2.0, 0.1);
    CHECK(grid.n == 41);
    CHECK(grid.x(20) == doctest::Approx(0.0));
    CHECK(grid.x_max() == doctest::Approx(2.0));
    CHECK(grid.first_inside(0.0) == 21);   // strictly inside
    CHECK(grid.last_inside(0.0) == 19);
    CHECK(grid.first_inside(-0.05) == 20);
    CHECK(grid.last_inside(1.95) == 39);
}

TEST_CASE("convolve: unit field gives unit value away from the edges") {
    const Grid grid = Grid::symmetric(5.0, 0.05);
    const Kernel kernel = Kernel::triangular(1.0, 0.05);
    Convolver conv(grid, kernel, ConvPath::Direct);
    std::vector<double> u(static_cast<std::size_t>(grid.n), 1.0);
    std::vector<double> out(u.size());
    conv.apply(u, out);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        if (std::abs(x) <= 5.0 - 1.0 - 0.05)
            CHECK(out[static_cast<std::size_t>(i)] == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("convolve: single interior unit node reproduces the tap column") {
    const Grid grid = Grid::symmetric(3.0, 0.05);
    const Kernel kernel = Kernel::triangular(1.0, 0.05);
    Convolver conv(grid, kernel, ConvPath::Direct);
    std::vector<double> u(static_cast<std::size_t>(grid.n), 0.0);
    const int center = (grid.n - 1) / 2;
    u[static_cast<std::size_t>(center)] = 1.0;
    std::vector<double> out(u.size());
    conv.apply(u, out);
    const auto taps = conv.taps();
    const int half = conv.taps_half();
    for (int i = 0; i < grid.n; ++i) {
        const int offset = i - center;
        const double expected = std::abs(offset) <= half
                                    ? taps[static_cast<std::size_t>(offset + half)] * grid.dx
                                    : 0.0;
        CHECK(out[static_cast<std::size_t>(i)] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("convolve: serial, OpenMP and transform paths agree") {
    std::mt19937_64 rng(20240818);
    for (const double dx : {0.05, 0.031}) {
        const Grid grid = Grid::symmetric(4.0, dx);
        for (const Kernel &kernel :
             {Kernel::triangular(1.0, dx), Kernel::gaussian(0.8, 4.8, dx)}) {
            Convolver serial(grid, kernel, ConvPath::Serial);
            Convolver direct(grid, kernel, ConvPath::Direct);
            Convolver fft(grid, kernel, ConvPath::Fft);
            const std::vector<double> u = random_field(grid, rng);
            std::vector<double> a(u.size()), b(u.size()), c(u.size());
            serial.apply(u, a);
            direct.apply(u, b);
            fft.apply(u, c);
            double omp_diff = 0.0, fft_diff = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                omp_diff = std::max(omp_diff, std::abs(a[i] - b[i]));
                fft_diff = std::max(fft_diff, std::abs(a[i] - c[i]));
            }
            CHECK(omp_diff == 0.0); // same per-row summation order
            CHECK(fft_diff <= 1e-10);
        }
    }
}

TEST_CASE("convolve: nonnegativity and max principle") {
    std::mt19937_64 rng(5);
    const Grid grid = Grid::symmetric(4.0, 0.05);
    const Kernel kernel = Kernel::triangular(1.0, 0.05);
    Convolver conv(grid, kernel, ConvPath::Direct);
    std::vector<double> out(static_cast<std::size_t>(grid.n));
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> u = random_field(grid, rng);
        conv.apply(u, out);
        const double umax = *std::max_element(u.begin(), u.end());
        for (double v : out) {
            CHECK(v >= 0.0);
            CHECK(v <= umax * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("domain integral: constants and end cells") {
    const Grid grid = Grid::symmetric(2.0, 0.05);
    std::vector<double> zero(static_cast<std::size_t>(grid.n), 0.0);
    CHECK(domain_integral(grid, -1.0, 1.0, zero) == 0.0);

    std::vector<double> one(static_cast<std::size_t>(grid.n), 1.0);
    CHECK(domain_integral(grid, -1.0, 1.0, one) == doctest::Approx(2.0).epsilon(1e-12));
    // off-node boundaries: still exact for constants
    CHECK(domain_integral(grid, -0.98, 1.013, one) == doctest::Approx(1.993).epsilon(1e-12));
}

TEST_CASE("domain integral: second-order convergence on a smooth hump") {
    // u(x) = cos(pi x / 2) on [-1, 1], zero outside; boundaries off the nodes.
    const double g = -1.0, h = 1.0;
    const double exact = 4.0 / M_PI;
    const auto error_at = [&](double dx) {
        const Grid grid = Grid::symmetric(2.0 + 0.37 * dx, dx); // misalign the nodes
        std::vector<double> u(static_cast<std::size_t>(grid.n), 0.0);
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.x(i);
            if (x > g && x < h)
                u[static_cast<std::size_t>(i)] = std::cos(0.5 * M_PI * x);
        }
        return std::abs(domain_integral(grid, g, h, u) - exact);
    };
    const double e1 = error_at(0.02);
    const double e2 = error_at(0.01);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("domain integral: monotone in the integrand") {
    std::mt19937_64 rng(11);
    const Grid grid = Grid::symmetric(2.0, 0.05);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> u = random_field(grid, rng);
        std::vector<double> v = u;
        std::uniform_real_distribution<double> bump(0.0, 0.5);
        for (auto &x : v)
            x += bump(rng);
        CHECK(domain_integral(grid, -1.71, 1.64, u) <= domain_integral(grid, -1.71, 1.64, v));
    }
}

TEST_CASE("boundary flux: zero field, symmetry, analytic value") {
    const Grid grid = Grid::symmetric(3.0, 0.01);
    const Kernel kernel = Kernel::triangular(1.0, 0.01);

    std::vector<double> zero(static_cast<std::size_t>(grid.n), 0.0);
    const FluxPair fz = boundary_flux(grid, kernel, -1.0, 1.0, zero);
    CHECK(fz.left == 0.0);
    CHECK(fz.right == 0.0);

    // even field, symmetric domain: the two fluxes coincide
    std::vector<double> even(static_cast<std::size_t>(grid.n), 0.0);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        if (std::abs(x) < 1.0)
            even[static_cast<std::size_t>(i)] = std::cos(0.5 * M_PI * x);
    }
    const FluxPair fe = boundary_flux(grid, kernel, -1.0, 1.0, even);
    CHECK(std::abs(fe.left - fe.right) <= 1e-10);

    // u = 1 on [-1, 1]: right flux is the integral of the tail over [0, 2],
    // which is 1/6 for the unit triangular profile.
    std::vector<double> one(static_cast<std::size_t>(grid.n), 1.0);
    const FluxPair fo = boundary_flux(grid, kernel, -1.0, 1.0, one);
    CHECK(fo.right == doctest::Approx(1.0 / 6.0).epsilon(2e-4));
}

TEST_CASE("boundary flux equals the brute-force double integral") {
    std::mt19937_64 rng(31);
    // boundaries on nodes: the tail table is sampled exactly
    {
        const Grid grid = Grid::symmetric(3.0, 0.05);
        const Kernel kernel = Kernel::triangular(1.0, 0.05);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> u = random_field(grid, rng);
            const double g = -1.25, h = 1.5;
            const FluxPair fast = boundary_flux(grid, kernel, g, h, u);
            const FluxPair slow = oracle::flux_two_dim(grid, kernel, g, h, u);
            CHECK(fast.right == doctest::Approx(slow.right).epsilon(1e-7));
            CHECK(fast.left == doctest::Approx(slow.left).epsilon(1e-7));
        }
    }
    // off-node boundaries on a fine grid: agreement to the stated tolerance
    {
        const Grid grid = Grid::symmetric(2.0, 0.002);
        const Kernel kernel = Kernel::gaussian(0.6, 3.6, 0.002);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> u = random_field(grid, rng);
            const double g = -0.977131, h = 1.20443;
            const FluxPair fast = boundary_flux(grid, kernel, g, h, u);
            const FluxPair slow = oracle::flux_two_dim(grid, kernel, g, h, u);
            CHECK(std::abs(fast.right - slow.right) <= 1e-6);
            CHECK(std::abs(fast.left - slow.left) <= 1e-6);
        }
    }
}
