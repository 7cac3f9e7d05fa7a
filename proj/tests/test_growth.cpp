#include "frontspread/growth.hpp"

#include "frontspread/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace frontspread;

namespace {

LotkaVolterraParams benchmark_competition() { return {1, 1, 0.5, 1, 1, 0.5}; }
LotkaVolterraParams benchmark_predation() { return {1, 1, 0.5, 0.5, 1, 0.25}; }

// Brute-force oracle: largest |partial derivative| over the box, by central
// differences on a fine lattice.
double lipschitz_by_sampling(const GrowthModel &m, double K1, double K2) {
    const int n = 160;
    const double eps1 = K1 * 1e-6 + 1e-9, eps2 = K2 * 1e-6 + 1e-9;
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double u1 = K1 * i / n, u2 = K2 * j / n;
            const double lo1 = std::max(0.0, u1 - eps1), hi1 = std::min(K1, u1 + eps1);
            const double lo2 = std::max(0.0, u2 - eps2), hi2 = std::min(K2, u2 + eps2);
            const auto [f1a, f2a] = m.react(hi1, u2);
            const auto [f1b, f2b] = m.react(lo1, u2);
            worst = std::max(worst, std::abs(f1a - f1b) / (hi1 - lo1));
            worst = std::max(worst, std::abs(f2a - f2b) / (hi1 - lo1));
            const auto [f1c, f2c] = m.react(u1, hi2);
            const auto [f1d, f2d] = m.react(u1, lo2);
            worst = std::max(worst, std::abs(f1c - f1d) / (hi2 - lo2));
            worst = std::max(worst, std::abs(f2c - f2d) / (hi2 - lo2));
        }
    }
    return worst;
}

LotkaVolterraParams random_params(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> draw(0.2, 2.0);
    return {draw(rng), draw(rng), draw(rng), draw(rng), draw(rng), draw(rng)};
}

} // namespace

TEST_CASE("react: pointwise values") {
    const GrowthModel comp = GrowthModel::competition(benchmark_competition());
    {
        const auto [f1, f2] = comp.react(0.0, 0.7);
        CHECK(f1 == 0.0);
        CHECK(f2 == doctest::Approx(0.21).epsilon(1e-14));
    }
    {
        const auto [f1, f2] = comp.react(1.0, 0.0);
        CHECK(f1 == 0.0);
        CHECK(f2 == 0.0);
    }
    const GrowthModel pred = GrowthModel::predator_prey(benchmark_predation());
    {
        const auto [f1, f2] = pred.react(0.5, 0.5);
        CHECK(f1 == doctest::Approx(0.125).epsilon(1e-14));
        CHECK(f2 == doctest::Approx(0.0625).epsilon(1e-14));
    }
}

TEST_CASE("a-priori bounds") {
    const GrowthModel comp = GrowthModel::competition(benchmark_competition());
    {
        const auto [a1, a2] = comp.a_priori_bounds(0.8, 0.8);
        CHECK(a1 == doctest::Approx(1.0));
        CHECK(a2 == doctest::Approx(1.0));
    }
    const GrowthModel pred = GrowthModel::predator_prey(benchmark_predation());
    {
        const auto [a1, a2] = pred.a_priori_bounds(0.8, 0.8);
        CHECK(a1 == doctest::Approx(1.0));
        CHECK(a2 == doctest::Approx(0.8)); // 0.8 > (0.5 + 0.25 * 1) / 1 = 0.75
    }
    {
        const auto [a1, a2] = comp.a_priori_bounds(10.0, 10.0);
        CHECK(a1 == doctest::Approx(10.0));
        CHECK(a2 == doctest::Approx(10.0));
    }
}

TEST_CASE("lipschitz constant: analytic bound vs sampling oracle") {
    const GrowthModel comp = GrowthModel::competition(benchmark_competition());
    CHECK(comp.lipschitz_constant(1.0, 1.0) == doctest::Approx(3.5).epsilon(1e-14));

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const LotkaVolterraParams p = random_params(rng);
        for (const GrowthModel &m :
             {GrowthModel::competition(p), GrowthModel::predator_prey(p)}) {
            std::uniform_real_distribution<double> draw_k(0.3, 2.5);
            const double K1 = draw_k(rng), K2 = draw_k(rng);
            const double bound = m.lipschitz_constant(K1, K2);
            CHECK(bound >= lipschitz_by_sampling(m, K1, K2) * (1.0 - 1e-6));
            // monotone in the box
            CHECK(m.lipschitz_constant(2.0 * K1, K2) >= bound);
            CHECK(m.lipschitz_constant(K1, 2.0 * K2) >= bound);
        }
    }
    // degenerate box: finite value at the origin
    CHECK(std::isfinite(comp.lipschitz_constant(0.0, 0.0)));
}

TEST_CASE("regime classification") {
    CHECK(GrowthModel::competition(benchmark_competition()).regime() ==
          Regime::WeakCompetition); // 1/0.5 = 2 > 1 > 0.5
    CHECK(GrowthModel::predator_prey(benchmark_predation()).regime() ==
          Regime::WeakPredation); // 1 > 0.25 + 0.125
    CHECK(GrowthModel::competition({1, 1, 2, 1, 1, 2}).regime() == Regime::Other); // 1/2 < 1
}

TEST_CASE("conditions (f1)/(f2) hold by sampling") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const LotkaVolterraParams p = random_params(rng);
        for (const GrowthModel &m :
             {GrowthModel::competition(p), GrowthModel::predator_prey(p)}) {
            const auto [A1, A2] = m.a_priori_bounds(1.5, 1.5);
            const double k = m.carrying_k();
            for (int i = 0; i <= 40; ++i) {
                for (int j = 0; j <= 40; ++j) {
                    const double u1 = 2.0 * A1 * i / 40;
                    const double u2 = 2.0 * A2 * j / 40;
                    const auto [f1, f2] = m.react(u1, u2);
                    if (u1 > k * (1 + 1e-12))
                        CHECK(f1 < 0.0);
                    if (u1 > 0 && u1 <= k)
                        CHECK(f1 <= m.growth_r() * u1 + 1e-12);
                    if (u1 <= A1 && u2 > m.theta(A1) * (1 + 1e-12))
                        CHECK(f2 < 0.0);
                }
            }
        }
    }
}

TEST_CASE("lipschitz property of react") {
    std::mt19937_64 rng(99);
    // per-component form on random models
    for (int trial = 0; trial < 15; ++trial) {
        const LotkaVolterraParams p = random_params(rng);
        for (const GrowthModel &m :
             {GrowthModel::competition(p), GrowthModel::predator_prey(p)}) {
            const auto [A1, A2] = m.a_priori_bounds(1.0, 1.0);
            const double L = m.lipschitz_constant(A1, A2);
            std::uniform_real_distribution<double> d1(0.0, A1), d2(0.0, A2);
            for (int s = 0; s < 400; ++s) {
                const double u1 = d1(rng), u2 = d2(rng), v1 = d1(rng), v2 = d2(rng);
                const auto [fu1, fu2] = m.react(u1, u2);
                const auto [fv1, fv2] = m.react(v1, v2);
                const double dist = std::abs(u1 - v1) + std::abs(u2 - v2);
                CHECK(std::abs(fu1 - fv1) <= L * dist + 1e-12);
                CHECK(std::abs(fu2 - fv2) <= L * dist + 1e-12);
            }
        }
    }
    // summed form on the benchmark models
    for (const GrowthModel &m : {GrowthModel::competition(benchmark_competition()),
                                 GrowthModel::predator_prey(benchmark_predation())}) {
        const auto [A1, A2] = m.a_priori_bounds(1.0, 1.0);
        const double L = m.lipschitz_constant(A1, A2);
        std::uniform_real_distribution<double> d1(0.0, A1), d2(0.0, A2);
        for (int s = 0; s < 2000; ++s) {
            const double u1 = d1(rng), u2 = d2(rng), v1 = d1(rng), v2 = d2(rng);
            const auto [fu1, fu2] = m.react(u1, u2);
            const auto [fv1, fv2] = m.react(v1, v2);
            const double dist = std::abs(u1 - v1) + std::abs(u2 - v2);
            CHECK(std::abs(fu1 - fv1) + std::abs(fu2 - fv2) <= L * dist + 1e-12);
        }
    }
}

TEST_CASE("custom models: contract sampled at construction") {
    const auto logistic1 = [](double u1, double u2) { return u1 * (1.0 - u1 - 0.5 * u2); };
    const auto logistic2 = [](double u1, double u2) { return u2 * (1.0 - u2 - 0.5 * u1); };
    const GrowthModel ok = GrowthModel::custom(
        logistic1, logistic2, 1.0, 1.0, [](double) { return 1.0; },
        [](double K1, double K2) { return 1.0 + 2.0 * std::max(K1, K2) + 0.5 * (K1 + K2); });
    const auto [f1, f2] = ok.react(0.5, 0.5);
    CHECK(f1 == doctest::Approx(0.125));
    CHECK(f2 == doctest::Approx(0.125));
    CHECK(ok.regime() == Regime::Other);

    // f1 that does not vanish at u1 = 0 must be rejected
    CHECK_THROWS_AS((void)GrowthModel::custom([](double, double) { return 1.0; }, logistic2, 1.0,
                                              1.0, [](double) { return 1.0; },
                                              [](double, double) { return 10.0; }),
                    Error);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((void)GrowthModel::competition({1, -1, 0.5, 1, 1, 0.5}), Error);
    CHECK_THROWS_AS((void)GrowthModel::predator_prey({0, 1, 0.5, 1, 1, 0.5}), Error);
}
