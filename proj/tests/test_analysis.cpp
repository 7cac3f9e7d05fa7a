#include "frontspread/analysis.hpp"

#include "frontspread/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace frontspread;

namespace {

GrowthModel benchmark_competition() { return GrowthModel::competition({1, 1, 0.5, 1, 1, 0.5}); }
GrowthModel benchmark_predation() { return GrowthModel::predator_prey({1, 1, 0.5, 0.5, 1, 0.25}); }

// Hand-built trajectory: range grows linearly at the given speed, maxima
// decay geometrically toward max_end.
Trajectory synthetic_trajectory(double t_final, double speed, double range0, double max_end,
                                int steps = 200) {
    Trajectory traj;
    traj.grid = Grid::symmetric(50.0, 0.5);
    for (int k = 0; k <= steps; ++k) {
        TrajectoryRow row;
        row.t = t_final * k / steps;
        row.h = 0.5 * range0 + speed * row.t;
        row.g = -row.h;
        row.hp = speed;
        row.gp = -speed;
        row.max1 = row.max2 = max_end + (0.8 - max_end) * std::exp(-0.1 * row.t);
        row.mass1 = row.mass2 = row.max1 * (row.h - row.g);
        traj.rows.push_back(row);
    }
    return traj;
}

} // namespace

TEST_CASE("classify: the three verdicts") {
    SUBCASE("fast fronts above the critical range spread") {
        const Trajectory traj = synthetic_trajectory(100.0, 0.2, 2.0, 0.6);
        const Classification c = classify(traj, 3.0);
        CHECK(c.verdict == Verdict::Spreading);
        CHECK(c.final_range > 3.0);
    }
    SUBCASE("spreading without a defined critical length") {
        const Trajectory traj = synthetic_trajectory(100.0, 0.2, 2.0, 0.6);
        CHECK(classify(traj, std::nullopt).verdict == Verdict::Spreading);
    }
    SUBCASE("stalled fronts with dying densities vanish") {
        Trajectory traj = synthetic_trajectory(100.0, 0.0, 2.0, 0.0);
        for (auto &row : traj.rows) {
            row.hp = 1e-7 * std::exp(-row.t);
            row.gp = -row.hp;
            row.max1 = row.max2 = 0.8 * std::exp(-0.2 * row.t);
        }
        const Classification c = classify(traj, 3.0);
        CHECK(c.verdict == Verdict::Vanishing);
        CHECK(c.final_range <= 3.0 * 1.05);
    }
    SUBCASE("slow growth below the critical range is undetermined") {
        Trajectory traj = synthetic_trajectory(10.0, 0.01, 1.0, 0.5);
        const Classification c = classify(traj, 3.0);
        CHECK(c.verdict == Verdict::Undetermined);
        CHECK(c.note.find("t_final") != std::string::npos);
    }
    SUBCASE("aborted trajectories are rejected") {
        Trajectory traj = synthetic_trajectory(10.0, 0.1, 1.0, 0.5);
        traj.abort = AbortReason::AmbientMargin;
        CHECK_THROWS_AS((void)classify(traj, 3.0), Error);
    }
}

TEST_CASE("criteria check") {
    const GrowthModel model = benchmark_competition(); // a = (1, 1)
    {
        // a1 = d1: spreading is unconditional, boundary case included
        const CriteriaResult r = criteria_check(model, 1.0, 2.0, 0.5, std::nullopt);
        CHECK(r.prediction == Prediction::MustSpread);
    }
    {
        const CriteriaResult r = criteria_check(model, 2.0, 2.0, 1.2, 2.0);
        CHECK(r.prediction == Prediction::MustSpread); // h0 >= ell*/2
    }
    {
        const CriteriaResult r = criteria_check(model, 2.0, 2.0, 0.3 * 2.0, 2.0);
        CHECK(r.prediction == Prediction::DependsOnMu);
        CHECK(r.ell_star == 2.0);
    }
    // missing ell_star when required
    CHECK_THROWS_AS((void)criteria_check(model, 2.0, 2.0, 0.5, std::nullopt), Error);
}

TEST_CASE("mu threshold bisection on a synthetic threshold") {
    const double mu_star = 0.37;
    int launches = 0;
    const auto launch = [&](double mu_total) {
        ++launches;
        MuRun run;
        run.mu_total = mu_total;
        run.verdict = mu_total < mu_star ? Verdict::Vanishing : Verdict::Spreading;
        return run;
    };
    const MuBracket bracket = mu_threshold(launch, 1e-3, 1e3, 12, 2.0);
    CHECK(bracket.mu_lo < mu_star);
    CHECK(bracket.mu_hi >= mu_star);
    CHECK(bracket.mu_hi / bracket.mu_lo <= 2.0);
    CHECK(launches <= 14); // two endpoints plus at most 12 bisections
    CHECK(bracket.monotone_consistent);

    // endpoints must classify as required
    const auto always_spread = [&](double mu_total) {
        MuRun run;
        run.mu_total = mu_total;
        run.verdict = Verdict::Spreading;
        return run;
    };
    CHECK_THROWS_AS((void)mu_threshold(always_spread, 1e-3, 1e3, 12, 2.0), Error);
}

TEST_CASE("coexistence limits") {
    {
        const auto [u1, u2] = coexistence_limit(benchmark_competition());
        CHECK(u1 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(u2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    }
    {
        const auto [u1, u2] = coexistence_limit(benchmark_predation());
        CHECK(u1 == doctest::Approx((1.0 - 0.25) / 1.125).epsilon(1e-14));
        CHECK(u2 == doctest::Approx((0.25 + 0.5) / 1.125).epsilon(1e-14));
    }
    {
        // vanishing coupling: the decoupled logistic levels
        const auto [u1, u2] = coexistence_limit(GrowthModel::competition({1, 1, 1e-9, 1, 1, 1e-9}));
        CHECK(u1 == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(u2 == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK_THROWS_AS((void)coexistence_limit(GrowthModel::competition({1, 1, 2, 1, 1, 2})), Error);
}

TEST_CASE("iterate_bounds: competition squeeze") {
    const IterationSequences seq = iterate_bounds(benchmark_competition(), 50);
    CHECK(seq.p == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(seq.q == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(seq.a_upper.front() == doctest::Approx(1.0)); // starts at a1/b1
    CHECK(std::abs(seq.a_upper.back() - 2.0 / 3.0) <= 1e-12);
    for (std::size_t i = 1; i < seq.a_upper.size(); ++i) {
        // strictly monotone until the iteration saturates at the fixed point
        if (seq.a_upper[i] != seq.a_upper[i - 1])
            CHECK(seq.a_upper[i] < seq.a_upper[i - 1]);
        if (i <= 5)
            CHECK(seq.a_upper[i] < seq.a_upper[i - 1]);
        CHECK(seq.a_upper[i] > 2.0 / 3.0 - 1e-13); // bounded below by the limit
        if (i <= 5)
            CHECK(seq.b_lower[i] > seq.b_lower[i - 1]);
        CHECK(seq.b_lower[i] >= seq.b_lower[i - 1]);
    }
    // recurrence is the affine map
    for (std::size_t i = 1; i < seq.a_upper.size(); ++i)
        CHECK(seq.a_upper[i] ==
              doctest::Approx(seq.p + seq.q * seq.a_upper[i - 1]).epsilon(1e-14));

    const IterationSequences one = iterate_bounds(benchmark_competition(), 1);
    CHECK(one.a_upper.size() == 1);
    CHECK(one.a_upper[0] == 1.0);
}

TEST_CASE("iterate_bounds: predation squeeze") {
    const IterationSequences seq = iterate_bounds(benchmark_predation(), 50);
    const auto [u1, u2] = coexistence_limit(benchmark_predation());
    CHECK(std::abs(seq.b_upper.back() - u2) <= 1e-10);
    CHECK(std::abs(seq.b_lower.back() - u2) <= 1e-10);
    CHECK(std::abs(seq.a_upper.back() - u1) <= 1e-10);
    CHECK(std::abs(seq.a_lower.back() - u1) <= 1e-10);
    for (std::size_t i = 1; i < seq.b_lower.size(); ++i) {
        // increasing from below / decreasing from above, strictly until the
        // fixed point absorbs the iteration
        CHECK(seq.b_lower[i] >= seq.b_lower[i - 1]);
        CHECK(seq.b_upper[i] <= seq.b_upper[i - 1]);
        if (i <= 4) {
            CHECK(seq.b_lower[i] > seq.b_lower[i - 1]);
            CHECK(seq.b_upper[i] < seq.b_upper[i - 1]);
        }
        CHECK(seq.b_lower[i] > 0.0);
        CHECK(seq.b_upper[i] > 0.0);
    }
    // the second-species recurrence with ratio q^2
    const double affine = seq.a * (1.0 - seq.q);
    for (std::size_t i = 1; i < seq.b_lower.size(); ++i) {
        CHECK(seq.b_lower[i] ==
              doctest::Approx(affine + seq.q * seq.q * seq.b_lower[i - 1]).epsilon(1e-13));
        CHECK(seq.b_upper[i] ==
              doctest::Approx(affine + seq.q * seq.q * seq.b_upper[i - 1]).epsilon(1e-13));
    }
}

TEST_CASE("iterate_bounds agrees with coexistence_limit on random weak draws") {
    std::mt19937_64 rng(20240820);
    std::uniform_real_distribution<double> draw(0.2, 2.0);
    int found = 0;
    while (found < 20) {
        const LotkaVolterraParams p = {draw(rng), draw(rng), draw(rng),
                                       draw(rng), draw(rng), draw(rng)};
        for (const GrowthModel &m :
             {GrowthModel::competition(p), GrowthModel::predator_prey(p)}) {
            if (m.regime() == Regime::Other)
                continue;
            ++found;
            const auto [u1, u2] = coexistence_limit(m);
            CHECK(u1 > 0.0);
            CHECK(u2 > 0.0);
            const IterationSequences seq = iterate_bounds(m, 400);
            CHECK(std::abs(seq.a_upper.back() - u1) <= 1e-10);
            CHECK(std::abs(seq.b_lower.back() - u2) <= 1e-10);
        }
    }
}

TEST_CASE("verify_limit: window errors and preconditions") {
    const GrowthModel model = benchmark_competition();
    const auto [u1_star, u2_star] = coexistence_limit(model);

    Trajectory traj;
    traj.grid = Grid::symmetric(10.0, 0.1);
    const int steps = 100;
    for (int k = 0; k <= steps; ++k) {
        TrajectoryRow row;
        row.t = 0.5 * k;
        row.h = 2.0 + 0.15 * row.t;
        row.g = -row.h;
        row.hp = 0.15;
        row.gp = -0.15;
        row.max1 = row.max2 = 0.7;
        traj.rows.push_back(row);
        if (k % 10 == 0) {
            FieldSnapshot snap;
            snap.t = row.t;
            snap.g = row.g;
            snap.h = row.h;
            snap.u1.assign(static_cast<std::size_t>(traj.grid.n), 0.0);
            snap.u2.assign(static_cast<std::size_t>(traj.grid.n), 0.0);
            for (int i = 0; i < traj.grid.n; ++i) {
                const double x = traj.grid.x(i);
                if (x > row.g && x < row.h) {
                    snap.u1[static_cast<std::size_t>(i)] = u1_star + 0.01 * std::sin(x + row.t);
                    snap.u2[static_cast<std::size_t>(i)] = u2_star - 0.01 * std::cos(x);
                }
            }
            traj.snapshots.push_back(std::move(snap));
        }
    }
    const Classification spread = classify(traj, 3.0);
    REQUIRE(spread.verdict == Verdict::Spreading);

    const LimitReport report = verify_limit(traj, spread, model, 0.1, {0.0, -1.0, 1.0});
    CHECK(report.max_err1 <= 0.0100001);
    CHECK(report.max_err2 <= 0.0100001);
    CHECK(report.target.first == doctest::Approx(u1_star));

    // probe outside the populated range at the window start
    CHECK_THROWS_AS((void)verify_limit(traj, spread, model, 0.1, {9.9}), Error);

    // refuse non-spreading runs
    Classification vanishing = spread;
    vanishing.verdict = Verdict::Vanishing;
    CHECK_THROWS_AS((void)verify_limit(traj, vanishing, model, 0.1, {0.0}), Error);
}
