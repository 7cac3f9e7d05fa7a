#include "frontspread/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace frontspread;

namespace {

Kernel tri() { return Kernel::triangular(1.0, 0.05); }

SpectralProblem random_problem(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> draw_d(0.4, 2.0);
    std::uniform_real_distribution<double> draw_len(0.5, 5.0);
    std::uniform_real_distribution<double> draw_a(-2.0, 2.0);
    std::uniform_real_distribution<double> draw_theta(0.1, 1.6);
    std::uniform_real_distribution<double> draw_sigma(0.5, 1.4);
    std::uniform_int_distribution<int> pick(0, 1);
    const double sigma = draw_sigma(rng);
    const Kernel kernel = pick(rng) ? Kernel::triangular(sigma, sigma / 24)
                                    : Kernel::gaussian(sigma, 6.0 * sigma, sigma / 8);
    const double a = draw_a(rng);
    return SpectralProblem::constant_theta(draw_d(rng), kernel, a, a + draw_len(rng),
                                           draw_theta(rng), 256);
}

} // namespace

TEST_CASE("assemble: diagonal cases and row sums") {
    SUBCASE("d = 0 gives the multiplication operator") {
        const SpectralProblem p = SpectralProblem::constant_theta(0.0, tri(), 0.0, 2.0, 0.7, 64);
        const OperatorMatrix m = assemble(p);
        for (int i = 0; i < m.n; ++i)
            for (int j = 0; j < m.n; ++j)
                CHECK(m.at(i, j) == (i == j ? doctest::Approx(0.7) : doctest::Approx(0.0)));
    }
    SUBCASE("row sums with theta = 0 are nonpositive") {
        const SpectralProblem p = SpectralProblem::constant_theta(1.3, tri(), 0.0, 3.0, 0.0, 128);
        const OperatorMatrix m = assemble(p);
        for (int i = 0; i < m.n; ++i) {
            double row = 0.0;
            for (int j = 0; j < m.n; ++j)
                row += m.at(i, j);
            CHECK(row <= 1e-10);
        }
    }
    SUBCASE("near-symmetry up to the end weights") {
        const SpectralProblem p = SpectralProblem::constant_theta(1.0, tri(), 0.0, 2.0, 0.5, 128);
        const OperatorMatrix m = assemble(p);
        for (int i = 1; i < m.n - 1; ++i)
            for (int j = i + 1; j < m.n - 1; ++j)
                CHECK(m.at(i, j) == doctest::Approx(m.at(j, i)).epsilon(1e-12));
    }
}

TEST_CASE("principal eigenvalue: diagonal and tiny-interval limits") {
    {
        const SpectralProblem p = SpectralProblem::constant_theta(0.0, tri(), 0.0, 2.0, 0.7, 64);
        CHECK(principal_eigenvalue(p).lambda_p == doctest::Approx(0.7).epsilon(1e-10));
    }
    {
        // Tiny interval: the integral term vanishes and lambda -> theta - d.
        const Kernel k = Kernel::triangular(1.0, 1e-5);
        const SpectralProblem p = SpectralProblem::constant_theta(1.0, k, 0.0, 0.001, 0.5, 512);
        const double lambda = principal_eigenvalue(p).lambda_p;
        CHECK(lambda == doctest::Approx(-0.5).epsilon(2e-3));
        CHECK(lambda > -0.5); // the integral term only adds mass
        CHECK(std::abs(principal_eigenvalue_dense(p) - lambda) <= 1e-8);
    }
}

TEST_CASE("principal eigenvalue: monotone and bounded in the interval length") {
    double prev = -1e30;
    for (const double ell : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const SpectralProblem p = SpectralProblem::constant_theta(1.0, tri(), 0.0, ell, 0.5, 256);
        const double lambda = principal_eigenvalue(p).lambda_p;
        CHECK(lambda > prev);
        CHECK(lambda < 0.5);
        CHECK(std::abs(lambda - principal_eigenvalue_dense(p)) <= 1e-8);
        prev = lambda;
    }
}

TEST_CASE("matvec: OpenMP rows are bit-equal to the serial reference") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> draw(-1.0, 1.0);
    const SpectralProblem p = SpectralProblem::constant_theta(1.3, tri(), -0.4, 2.1, 0.6, 192);
    const OperatorMatrix m = assemble(p);
    std::vector<double> x(static_cast<std::size_t>(m.n));
    for (auto &v : x)
        v = draw(rng);
    std::vector<double> a(x.size()), b(x.size());
    matvec_serial(m, x, a);
    matvec_omp(m, x, b);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(a[i] == b[i]);
}

TEST_CASE("power iteration matches the dense route on random problems") {
    std::mt19937_64 rng(20240819);
    for (int trial = 0; trial < 25; ++trial) {
        const SpectralProblem p = random_problem(rng);
        const EigenResult r = principal_eigenvalue(p);
        const double dense = principal_eigenvalue_dense(p);
        CHECK(std::abs(r.lambda_p - dense) <= 1e-8);
        // spectrum bounds from the row sums
        double theta_min = 1e300, theta_max = -1e300;
        for (double t : p.theta) {
            theta_min = std::min(theta_min, t);
            theta_max = std::max(theta_max, t);
        }
        CHECK(r.lambda_p >= theta_min - p.d - 1e-10);
        CHECK(r.lambda_p <= theta_max + 1e-10);
        // the eigenfunction is positive and normalized
        double sup = 0.0;
        for (double v : r.eigenfunction) {
            CHECK(v >= 0.0);
            sup = std::max(sup, v);
        }
        CHECK(sup == doctest::Approx(1.0));
    }
}

TEST_CASE("monotonicity in theta and in interval inclusion") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> bump(0.05, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        SpectralProblem p = random_problem(rng);
        const double base = principal_eigenvalue(p).lambda_p;

        SpectralProblem hotter = p;
        const double delta = bump(rng);
        for (double &t : hotter.theta)
            t += delta;
        CHECK(principal_eigenvalue(hotter).lambda_p > base);

        SpectralProblem wider = p;
        wider.a -= bump(rng);
        wider.b += bump(rng);
        CHECK(principal_eigenvalue(wider).lambda_p >= base - 1e-9);
    }
}

TEST_CASE("discretization convergence at the default node count") {
    const SpectralProblem p512 = SpectralProblem::constant_theta(1.0, tri(), 0.0, 2.5, 0.5, 512);
    const SpectralProblem p1024 = SpectralProblem::constant_theta(1.0, tri(), 0.0, 2.5, 0.5, 1024);
    CHECK(std::abs(principal_eigenvalue(p512).lambda_p - principal_eigenvalue(p1024).lambda_p) <
          1e-4);
}

TEST_CASE("critical length: root quality and contracts") {
    const CriticalLengthResult r = critical_length(1.0, 0.5, tri(), 1e-3, 512);
    CHECK(r.ell > 0.0);
    CHECK(std::abs(r.lambda_at_ell) <= 1e-6);
    // the zero crossing is genuine: negative below, positive above
    const auto lambda_at = [&](double ell) {
        return principal_eigenvalue(SpectralProblem::constant_theta(1.0, tri(), 0.0, ell, 0.5, 512))
            .lambda_p;
    };
    CHECK(lambda_at(r.ell * 0.9) < 0.0);
    CHECK(lambda_at(r.ell * 1.1) > 0.0);

    // stable under refinement
    const CriticalLengthResult fine = critical_length(1.0, 0.5, tri(), 1e-3, 1024);
    CHECK(std::abs(fine.ell - r.ell) <= 1e-3);

    // halving the tolerance moves the answer by no more than the old one
    const CriticalLengthResult tight = critical_length(1.0, 0.5, tri(), 5e-4, 512);
    CHECK(std::abs(tight.ell - r.ell) <= 1e-3);

    CHECK_THROWS_AS((void)critical_length(1.0, 1.0, tri(), 1e-3, 512), AlwaysPositiveError);
    CHECK_THROWS_AS((void)critical_length(1.0, 1.7, tri(), 1e-3, 512), AlwaysPositiveError);
}

TEST_CASE("ell star: minimum of the two species lengths") {
    const Kernel k = tri();
    {
        const EllStarResult r = ell_star(1.0, 0.5, k, 1.0, 0.5, k, 1e-3, 256);
        CHECK(r.ell1 == doctest::Approx(r.ell2).epsilon(1e-9));
        CHECK(r.ell_star == std::min(r.ell1, r.ell2));
    }
    {
        // larger a/d ratio gives the smaller critical length
        const EllStarResult r = ell_star(1.0, 0.5, k, 1.0, 0.25, k, 1e-3, 256);
        CHECK(r.ell1 < r.ell2);
        CHECK(r.ell_star == r.ell1);
    }
    CHECK_THROWS_AS((void)ell_star(1.0, 0.5, k, 1.0, 1.5, k, 1e-3, 256), AlwaysPositiveError);
}

TEST_CASE("spectral problem validation") {
    CHECK_THROWS_AS((void)SpectralProblem::constant_theta(1.0, tri(), 1.0, 0.5, 0.5, 256),
                    Error);
    CHECK_THROWS_AS((void)SpectralProblem::constant_theta(1.0, tri(), 0.0, 1.0, 0.5, 32), Error);
}
