#include "frontspread/verify.hpp"

#include "frontspread/analysis.hpp"
#include "frontspread/config.hpp"
#include "frontspread/errors.hpp"
#include "frontspread/evolver.hpp"
#include "frontspread/oracles.hpp"
#include "frontspread/runner.hpp"
#include "frontspread/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace frontspread {

namespace {

namespace fs = std::filesystem;

struct Reporter {
    std::vector<CheckResult> results;
    std::ostream *out = nullptr;

    void add(CheckResult r) {
        if (out) {
            (*out) << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << "  measured=" << r.measured
                   << "  threshold=" << r.threshold;
            if (!r.detail.empty())
                (*out) << "  [" << r.detail << "]";
            (*out) << "\n";
            out->flush();
        }
        results.push_back(std::move(r));
    }
};

std::function<double(double)> cosine_profile(double amplitude, double h0) {
    return [amplitude, h0](double x) { return amplitude * std::cos(0.5 * M_PI * x / h0); };
}

ExperimentConfig simulate_config(const ModelSpec &model, double d, double mu, double h0,
                                 double amplitude, double dx, double half_width, double t_final,
                                 int snapshot_every = 0) {
    ExperimentConfig cfg;
    cfg.kind = "simulate";
    cfg.model = model;
    cfg.solver.d1 = cfg.solver.d2 = d;
    cfg.solver.mu1 = cfg.solver.mu2 = mu;
    cfg.solver.t_final = t_final;
    cfg.grid.dx = dx;
    cfg.grid.half_width = half_width;
    cfg.initial.h0 = h0;
    cfg.initial.amplitude1 = cfg.initial.amplitude2 = amplitude;
    cfg.outputs.snapshot_every = snapshot_every;
    return cfg;
}

ModelSpec competition_benchmark() { return {"competition", 1, 1, 0.5, 1, 1, 0.5}; }
ModelSpec predation_benchmark() { return {"predator_prey", 1, 1, 0.5, 0.5, 1, 0.25}; }
ModelSpec subcritical_competition() { return {"competition", 0.5, 1, 0.5, 0.5, 1, 0.5}; }

// ----------------------------------------------------------------------
// quick-level contract checks

void check_kernel_contract(Reporter &rep) {
    double worst_sym = 0.0, worst_even = 0.0;
    bool constructed = true;
    std::string detail;
    try {
        std::mt19937_64 rng(101);
        const Kernel kernels[] = {Kernel::triangular(1.0, 0.05), Kernel::gaussian(1.0, 6.0, 0.05),
                                  Kernel::triangular(0.7, 0.02)};
        for (const Kernel &k : kernels) {
            if (!k.validate().passed)
                constructed = false;
            std::uniform_real_distribution<double> draw(-1.5 * k.support_radius(),
                                                        1.5 * k.support_radius());
            for (int t = 0; t < 400; ++t) {
                const double z = draw(rng);
                worst_sym = std::max(worst_sym, std::abs(k.tail_mass(z) + k.tail_mass(-z) - 1.0));
                worst_even = std::max(worst_even, std::abs(k.eval(z) - k.eval(-z)));
            }
        }
        const Kernel gauss = Kernel::gaussian(1.0, 6.0, 0.05);
        detail = "gaussian mass correction " + format_float(gauss.mass_correction());
        constructed = constructed && gauss.mass_correction() < 1e-8 && worst_even <= 1e-12;
    } catch (const std::exception &e) {
        constructed = false;
        detail = e.what();
    }
    rep.add({"kernel-contract", "dispersal kernel clauses and tail consistency",
             constructed && worst_sym <= 1e-10, worst_sym, 1e-10, detail});
}

void check_growth_contract(Reporter &rep) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> draw(0.3, 1.5);
    bool signs_ok = true;
    double worst_ratio = 0.0; // sampled Lipschitz over the analytic bound
    for (int trial = 0; trial < 8; ++trial) {
        const LotkaVolterraParams p = {draw(rng), draw(rng), draw(rng),
                                       draw(rng), draw(rng), draw(rng)};
        for (const GrowthModel &m : {GrowthModel::competition(p), GrowthModel::predator_prey(p)}) {
            const auto [A1, A2] = m.a_priori_bounds(1.0, 1.0);
            const double L = m.lipschitz_constant(A1, A2);
            std::uniform_real_distribution<double> du1(0.0, 2.0 * A1), du2(0.0, 2.0 * A2);
            for (int s = 0; s < 300; ++s) {
                const double u1 = du1(rng), u2 = du2(rng);
                const auto [f1, f2] = m.react(u1, u2);
                if (u1 > m.carrying_k() * (1 + 1e-12) && f1 >= 0.0)
                    signs_ok = false;
                if (u1 > 0 && u1 <= m.carrying_k() && f1 > m.growth_r() * u1 + 1e-12)
                    signs_ok = false;
                if (u1 <= A1 && u2 > m.theta(A1) * (1 + 1e-12) && f2 >= 0.0)
                    signs_ok = false;
            }
            std::uniform_real_distribution<double> in1(0.0, A1), in2(0.0, A2);
            for (int s = 0; s < 300; ++s) {
                const double u1 = in1(rng), u2 = in2(rng), v1 = in1(rng), v2 = in2(rng);
                const auto [fu1, fu2] = m.react(u1, u2);
                const auto [fv1, fv2] = m.react(v1, v2);
                const double dist = std::abs(u1 - v1) + std::abs(u2 - v2);
                if (dist > 1e-12) {
                    worst_ratio = std::max(worst_ratio, std::abs(fu1 - fv1) / (L * dist));
                    worst_ratio = std::max(worst_ratio, std::abs(fu2 - fv2) / (L * dist));
                }
            }
        }
    }
    rep.add({"growth-contract", "reaction sign conditions and Lipschitz bound",
             signs_ok && worst_ratio <= 1.0, worst_ratio, 1.0,
             signs_ok ? "sign conditions hold on all samples" : "sign condition violated"});
}

// ----------------------------------------------------------------------
// power iteration vs dense eigendecomposition

void check_spectral_oracle(Reporter &rep) {
    std::mt19937_64 rng(20240821);
    std::uniform_real_distribution<double> draw_d(0.4, 2.0);
    std::uniform_real_distribution<double> draw_len(0.5, 5.0);
    std::uniform_real_distribution<double> draw_a(-2.0, 2.0);
    std::uniform_real_distribution<double> draw_theta(0.1, 1.6);
    std::uniform_real_distribution<double> draw_sigma(0.5, 1.4);
    std::uniform_int_distribution<int> pick(0, 1);
    std::uniform_real_distribution<double> bump(0.05, 0.5);

    double worst = 0.0;
    bool bounds_ok = true, monotone_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        const double sigma = draw_sigma(rng);
        const Kernel kernel = pick(rng) ? Kernel::triangular(sigma, sigma / 24)
                                        : Kernel::gaussian(sigma, 6.0 * sigma, sigma / 8);
        const double a = draw_a(rng);
        const double theta = draw_theta(rng);
        const double d = draw_d(rng);
        const int n_eig = trial < 40 ? 128 : 256;
        const SpectralProblem p =
            SpectralProblem::constant_theta(d, kernel, a, a + draw_len(rng), theta, n_eig);
        const double lambda = principal_eigenvalue(p).lambda_p;
        worst = std::max(worst, std::abs(lambda - principal_eigenvalue_dense(p)));
        if (lambda < theta - d - 1e-10 || lambda > theta + 1e-10)
            bounds_ok = false;
        if (trial < 15) {
            SpectralProblem hotter = p;
            for (double &t : hotter.theta)
                t += bump(rng);
            if (!(principal_eigenvalue(hotter).lambda_p > lambda))
                monotone_ok = false;
            SpectralProblem wider = p;
            wider.a -= bump(rng);
            wider.b += bump(rng);
            if (principal_eigenvalue(wider).lambda_p < lambda - 1e-9)
                monotone_ok = false;
        }
    }
    std::ostringstream detail;
    detail << "eigenvalue bounds " << (bounds_ok ? "hold" : "VIOLATED") << ", monotonicity "
           << (monotone_ok ? "holds" : "VIOLATED") << " (50 problems, 15 nested pairs)";
    rep.add({"spectral-oracle", "power iteration vs dense eigendecomposition",
             worst <= 1e-8 && bounds_ok && monotone_ok, worst, 1e-8, detail.str()});
}

// ----------------------------------------------------------------------
// critical length of the interval operator

void check_critical_length(Reporter &rep) {
    const Kernel kernel = Kernel::triangular(1.0, 0.05);
    const CriticalLengthResult r512 = critical_length(1.0, 0.5, kernel, 1e-3, 512);
    const CriticalLengthResult r1024 = critical_length(1.0, 0.5, kernel, 1e-3, 1024);
    bool always_positive_ok = false;
    try {
        (void)critical_length(1.0, 1.0, kernel, 1e-3, 256);
    } catch (const AlwaysPositiveError &) {
        always_positive_ok = true;
    }
    const double stability = std::abs(r512.ell - r1024.ell);
    std::ostringstream detail;
    detail << "ell1=" << format_float(r512.ell) << ", refinement shift " << format_float(stability)
           << " (<= 1e-3), a >= d raises ALWAYS_POSITIVE: " << (always_positive_ok ? "yes" : "NO");
    rep.add({"critical-length", "eigenvalue zero crossing in the interval length",
             std::abs(r512.lambda_at_ell) <= 1e-6 && stability <= 1e-3 && always_positive_ok,
             std::abs(r512.lambda_at_ell), 1e-6, detail.str()});
}

// ----------------------------------------------------------------------
// randomized runs: density caps, boundary monotonicity, range envelope

void check_bounds_and_monotonicity(Reporter &rep) {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> draw_a(0.4, 1.2), draw_b(0.8, 1.5), draw_c(0.3, 0.9);
    std::uniform_real_distribution<double> draw_d(0.6, 1.6), draw_mu(0.1, 0.8);
    std::uniform_real_distribution<double> draw_amp(0.3, 1.2), draw_h0(0.8, 1.4);
    std::uniform_real_distribution<double> draw_sigma(0.6, 1.2);

    double worst_excess = -1e300;  // peak density minus cap
    double worst_shrink = 0.0;     // positive if a boundary ever moved inward
    double worst_growth = 0.0;     // range over the admissible envelope
    bool all_completed = true;
    std::string failure;

    for (int run = 0; run < 20 && failure.empty(); ++run) {
        const LotkaVolterraParams p = {draw_a(rng), draw_b(rng), draw_c(rng),
                                       draw_a(rng), draw_b(rng), draw_c(rng)};
        const GrowthModel model =
            run % 2 == 0 ? GrowthModel::competition(p) : GrowthModel::predator_prey(p);
        const double sigma = draw_sigma(rng);
        const Kernel kernel = run % 3 == 0 ? Kernel::gaussian(sigma, 6.0 * sigma, 0.05)
                                           : Kernel::triangular(sigma, 0.05);
        SolverConfig cfg;
        cfg.d1 = draw_d(rng);
        cfg.d2 = draw_d(rng);
        cfg.mu1 = draw_mu(rng);
        cfg.mu2 = draw_mu(rng);
        cfg.t_final = 3.0;
        const double h0 = draw_h0(rng);
        const double amp1 = draw_amp(rng), amp2 = draw_amp(rng);
        const auto [A1, A2] = model.a_priori_bounds(amp1, amp2);
        const double half =
            h0 + (cfg.mu1 * A1 + cfg.mu2 * A2) * cfg.t_final + 2.0 * kernel.support_radius() + 1.0;
        const Grid grid = Grid::symmetric(half, 0.05);
        Simulator sim(grid, model, kernel, kernel, cfg);
        const Trajectory traj =
            sim.run(sim.initialize(h0, cosine_profile(amp1, h0), cosine_profile(amp2, h0)));
        if (!traj.completed()) {
            all_completed = false;
            failure = "run " + std::to_string(run) + " aborted: " + traj.abort_detail;
            break;
        }
        worst_excess = std::max({worst_excess, traj.peak_u1 - traj.bound_a1,
                                 traj.peak_u2 - traj.bound_a2});
        const double vbar = cfg.mu1 * traj.bound_a1 + cfg.mu2 * traj.bound_a2;
        for (std::size_t i = 0; i < traj.rows.size(); ++i) {
            const auto &row = traj.rows[i];
            if (i > 0) {
                worst_shrink = std::max(worst_shrink, traj.rows[i - 1].h - row.h);
                worst_shrink = std::max(worst_shrink, row.g - traj.rows[i - 1].g);
            }
            worst_growth =
                std::max(worst_growth, (row.h - row.g) / (2.0 * h0 * std::exp(vbar * row.t)));
        }
    }
    rep.add({"solution-bounds", "density caps on 20 randomized configs",
             all_completed && worst_excess <= 1e-8, worst_excess, 1e-8,
             failure.empty() ? "largest peak-over-cap excess across runs" : failure});
    rep.add({"boundary-growth", "monotone boundaries and range envelope",
             all_completed && worst_shrink <= 0.0 && worst_growth <= 1.01, worst_growth, 1.01,
             "largest inward move " + format_float(worst_shrink)});
}

// ----------------------------------------------------------------------
// long benchmarks: contraction ratio and coexistence limits

void check_benchmarks(Reporter &rep) {
    struct Bench {
        const char *name;
        ModelSpec model;
        bool relative;
    };
    const Bench benches[] = {{"competition", competition_benchmark(), false},
                             {"predator_prey", predation_benchmark(), true}};
    double worst_ratio = 0.0;
    double worst_err = 0.0;
    bool all_ok = true;
    std::ostringstream detail;
    for (const Bench &bench : benches) {
        ExperimentConfig cfg =
            simulate_config(bench.model, 1.0, 0.5, 1.0, 0.8, 0.05, 32.0, 200.0, 50);
        cfg.solver.picard_tol = 1e-10;
        const SimulationOutcome outcome = run_simulation(cfg);
        if (!outcome.trajectory.completed() ||
            outcome.classification.verdict != Verdict::Spreading) {
            all_ok = false;
            detail << bench.name << ": run did not spread cleanly; ";
            continue;
        }
        for (double r : outcome.trajectory.picard_ratios)
            worst_ratio = std::max(worst_ratio, r);

        const GrowthModel model = make_model(bench.model);
        const LimitReport report =
            verify_limit(outcome.trajectory, outcome.classification, model, 0.10, {0.0, -1.0, 1.0});
        const auto [u1s, u2s] = coexistence_limit(model);
        const double err1 = bench.relative ? report.mean_err1 / u1s : report.mean_err1;
        const double err2 = bench.relative ? report.mean_err2 / u2s : report.mean_err2;
        worst_err = std::max({worst_err, err1, err2});
        detail << bench.name << ": window errors (" << format_float(report.mean_err1) << ", "
               << format_float(report.mean_err2) << ") target (" << format_float(u1s) << ", "
               << format_float(u2s) << "); ";
    }
    rep.add({"picard-contraction", "inner-iteration ratio on the benchmark runs",
             all_ok && worst_ratio <= 0.55, worst_ratio, 0.55,
             "largest successive-difference ratio"});
    rep.add({"coexistence-limit", "long-time interior values vs the coexistence state",
             all_ok && worst_err < 0.02, worst_err, 0.02, detail.str()});
}

// ----------------------------------------------------------------------
// squeeze recurrences

void check_recurrences(Reporter &rep) {
    double worst = 0.0;
    bool patterns_ok = true;
    for (const ModelSpec &spec : {competition_benchmark(), predation_benchmark()}) {
        const GrowthModel model = make_model(spec);
        const IterationSequences seq = iterate_bounds(model, 60);
        const auto [u1s, u2s] = coexistence_limit(model);
        worst = std::max(worst, std::abs(seq.a_upper.back() - u1s));
        worst = std::max(worst, std::abs(seq.b_lower.back() - u2s));
        for (std::size_t i = 1; i < seq.a_upper.size(); ++i) {
            if (seq.a_upper[i] > seq.a_upper[i - 1])
                patterns_ok = false;
            if (i <= 4 && !(seq.a_upper[i] < seq.a_upper[i - 1] && seq.a_upper[i] > 0))
                patterns_ok = false;
        }
        if (model.regime() == Regime::WeakPredation) {
            worst = std::max(worst, std::abs(seq.b_upper.back() - u2s));
            worst = std::max(worst, std::abs(seq.a_lower.back() - u1s));
            for (std::size_t i = 1; i < seq.b_lower.size(); ++i) {
                if (seq.b_lower[i] < seq.b_lower[i - 1] || seq.b_upper[i] > seq.b_upper[i - 1])
                    patterns_ok = false;
                if (!(seq.b_lower[i] > 0 && seq.b_upper[i] > 0))
                    patterns_ok = false;
            }
        }
    }
    rep.add({"squeeze-recurrences", "iteration limits match the closed forms",
             worst <= 1e-10 && patterns_ok, worst, 1e-10,
             patterns_ok ? "monotonicity patterns hold" : "monotonicity pattern VIOLATED"});
}

// ----------------------------------------------------------------------
// spreading/vanishing dichotomy cases

struct DichotomyContext {
    double ell_star = 0.0;
    ExperimentConfig small_geometry; // h0 = 0.3 ell*, mu to be filled per run
};

void check_dichotomy(Reporter &rep, DichotomyContext &ctx) {
    const Kernel kernel = Kernel::triangular(1.0, 0.02);
    const double ell1 = critical_length(1.0, 0.5, kernel, 1e-3, 512).ell;
    ctx.ell_star = ell1; // identical species parameters: ell2 = ell1

    bool ok = true;
    std::ostringstream detail;
    detail << "ell_star=" << format_float(ell1) << "; ";

    // (i) reaction rate equal to dispersal rate: spreading regardless of mu
    {
        const CriteriaResult pre = criteria_check(make_model(competition_benchmark()), 1.0, 1.0,
                                                  1.0, std::nullopt);
        ExperimentConfig cfg =
            simulate_config(competition_benchmark(), 1.0, 0.5, 1.0, 0.8, 0.05, 14.0, 25.0);
        const SimulationOutcome outcome = run_simulation(cfg);
        const bool pass = pre.prediction == Prediction::MustSpread &&
                          outcome.trajectory.completed() &&
                          outcome.classification.verdict == Verdict::Spreading;
        ok = ok && pass;
        detail << "(i) a1=d1 -> " << verdict_name(outcome.classification.verdict) << "; ";
    }
    // (ii) initial range at least half the critical length
    {
        const double h0 = 0.6 * ell1;
        const CriteriaResult pre =
            criteria_check(make_model(subcritical_competition()), 1.0, 1.0, h0, ell1);
        ExperimentConfig cfg =
            simulate_config(subcritical_competition(), 1.0, 0.5, h0, 0.4, 0.01, 12.0, 40.0);
        const SimulationOutcome outcome = run_simulation(cfg, ell1);
        const bool pass = pre.prediction == Prediction::MustSpread &&
                          outcome.trajectory.completed() &&
                          outcome.classification.verdict == Verdict::Spreading;
        ok = ok && pass;
        detail << "(ii) h0>=ell*/2 -> " << verdict_name(outcome.classification.verdict) << "; ";
    }
    // (iii) small range, tiny mu: vanishing with range below (1.05) ell*
    {
        const double h0 = 0.3 * ell1;
        ctx.small_geometry =
            simulate_config(subcritical_competition(), 1.0, 5e-4, h0, 0.4, 0.01, 8.0, 150.0);
        const CriteriaResult pre =
            criteria_check(make_model(subcritical_competition()), 1.0, 1.0, h0, ell1);
        const SimulationOutcome outcome = run_simulation(ctx.small_geometry, ell1);
        const Classification &c = outcome.classification;
        bool pass = pre.prediction == Prediction::DependsOnMu &&
                    outcome.trajectory.completed() && c.verdict == Verdict::Vanishing &&
                    c.final_range <= ell1 * 1.05 && c.final_max1 < 1e-3 && c.final_max2 < 1e-3;
        if (pass) {
            // vanishing diagnostics: boundary speeds, masses and maxima all
            // decay below 1e-3 by the end of the run
            const TrajectoryRow &last = outcome.trajectory.rows.back();
            pass = last.hp < 1e-3 && -last.gp < 1e-3 && last.mass1 < 1e-3 && last.mass2 < 1e-3 &&
                   last.max1 < 1e-3 && last.max2 < 1e-3;
            // and the limit interval must be subcritical: eigenvalue <= 0
            const double lambda_end =
                principal_eigenvalue(
                    SpectralProblem::constant_theta(1.0, kernel, last.g, last.h, 0.5, 256))
                    .lambda_p;
            pass = pass && lambda_end <= 1e-6;
            detail << "(iii) final-interval eigenvalue " << format_float(lambda_end) << "; ";
        }
        ok = ok && pass;
        detail << "(iii) mu=1e-3 -> " << verdict_name(c.verdict) << " range "
               << format_float(c.final_range) << " max " << format_float(c.final_max1) << "; ";
    }
    // (iv) same geometry, huge mu: spreading
    {
        ExperimentConfig cfg = ctx.small_geometry;
        cfg.solver.mu1 = cfg.solver.mu2 = 500.0;
        cfg.grid.half_width = 40.0;
        cfg.solver.t_final = 40.0;
        const SimulationOutcome outcome = run_simulation(cfg, ell1);
        const MuRun run = mu_run_from_outcome(outcome, 1e3, 40.0, ell1);
        const bool pass = run.verdict == Verdict::Spreading;
        ok = ok && pass;
        detail << "(iv) mu=1e3 -> " << verdict_name(run.verdict) << " range "
               << format_float(run.final_range);
    }
    rep.add({"dichotomy-criteria", "spreading/vanishing per the a-priori criteria", ok,
             ok ? 1.0 : 0.0, 1.0, detail.str()});
}

// ----------------------------------------------------------------------
// threshold bracket in the boundary coefficient

void check_mu_bracket(Reporter &rep, const DichotomyContext &ctx) {
    const double ell1 = ctx.ell_star;
    std::atomic<int> bisections{0}; // endpoint launches may run concurrently
    const auto launch = [&](double mu_total) {
        ExperimentConfig sub = ctx.small_geometry;
        sub.solver.mu1 = sub.solver.mu2 = 0.5 * mu_total;
        sub.grid.half_width = 30.0;
        double t_final = 150.0;
        for (;;) {
            sub.solver.t_final = t_final;
            const SimulationOutcome outcome = run_simulation(sub, ell1);
            const MuRun run = mu_run_from_outcome(outcome, mu_total, t_final, ell1);
            if (run.verdict != Verdict::Undetermined || t_final >= 600.0)
                return run;
            t_final *= 2;
        }
    };
    int parallelism = 1;
    if (const char *env = std::getenv("FRONTSPREAD_PARALLEL"))
        parallelism = std::max(1, std::atoi(env));

    bool ok = true;
    double ratio = 0.0;
    std::ostringstream detail;
    try {
        const auto counting_launch = [&](double mu_total) {
            ++bisections;
            return launch(mu_total);
        };
        const MuBracket bracket = mu_threshold(counting_launch, 1e-3, 1e3, 12, 2.0, parallelism);
        ratio = bracket.mu_hi / bracket.mu_lo;
        Verdict at_lo = Verdict::Undetermined, at_hi = Verdict::Undetermined;
        for (const MuRun &r : bracket.runs) {
            if (r.mu_total == bracket.mu_lo)
                at_lo = r.verdict;
            if (r.mu_total == bracket.mu_hi)
                at_hi = r.verdict;
        }
        ok = ratio <= 2.0 && at_lo == Verdict::Vanishing && at_hi == Verdict::Spreading &&
             bracket.monotone_consistent && bisections.load() - 2 <= 12;
        detail << "bracket [" << format_float(bracket.mu_lo) << ", " << format_float(bracket.mu_hi)
               << "], " << bisections.load() - 2 << " bisections, endpoints "
               << verdict_name(at_lo) << "/" << verdict_name(at_hi)
               << (bracket.monotone_consistent ? ", monotone" : ", NON-MONOTONE");
    } catch (const std::exception &e) {
        ok = false;
        detail << e.what();
    }
    rep.add({"mu-bracket", "bisection bracket for the boundary-coefficient threshold", ok, ratio,
             2.0, detail.str()});
}

// ----------------------------------------------------------------------
// comparison against dominating solutions

void check_comparison(Reporter &rep) {
    bool ok = true;
    std::ostringstream detail;

    // (a) dominating linear fixture
    double fixture_violation = 0.0;
    {
        const double dx = 0.005;
        const Kernel k = Kernel::triangular(1.0, dx);
        const GrowthModel model = GrowthModel::competition({0.5, 1, 0.5, 0.5, 1, 0.5});
        const double ell1 = critical_length(1.0, 0.5, k, 1e-3, 512).ell;
        const double h0 = 0.15 * ell1, h1 = 0.35 * ell1;
        const Grid grid = Grid::symmetric(h1 + 3.0, dx);
        SolverConfig cfg;
        cfg.mu1 = cfg.mu2 = 1e-3;
        cfg.t_final = 10.0;
        cfg.snapshot_every = 25;
        Simulator sim(grid, model, k, k, cfg);
        const Trajectory run =
            sim.run(sim.initialize(h0, cosine_profile(0.4, h0), cosine_profile(0.4, h0)));
        const oracle::UpperFixture fixture = oracle::linear_upper_fixture(
            grid, k, k, 1.0, 1.0, 0.5, 0.5, h0, h1, cosine_profile(0.4, h0),
            cosine_profile(0.4, h0), cfg.mu1, cfg.mu2, sim.dt(), cfg.t_final, cfg.snapshot_every);
        fixture_violation = run.completed()
                                ? compare_runs(run, fixture.trajectory).max_violation()
                                : 1e300;
        ok = ok && fixture_violation <= 1e-6;
        detail << "fixture violation " << format_float(fixture_violation) << "; ";
    }

    // (b) single-species reduction against the standalone scalar solver
    double reduction_sup = 0.0;
    {
        const double dx = 0.05;
        const Grid grid = Grid::symmetric(6.0, dx);
        const Kernel k = Kernel::triangular(1.0, dx);
        SolverConfig cfg;
        cfg.t_final = 3.0;
        cfg.picard_tol = 1e-13;
        cfg.conv_path = ConvPath::Serial;
        cfg.snapshot_every = 1;
        Simulator sim(grid, make_model(competition_benchmark()), k, k, cfg);
        FieldState state;
        state.g = -1.0;
        state.h = 1.0;
        state.u1.assign(static_cast<std::size_t>(grid.n), 0.0);
        state.u2.assign(static_cast<std::size_t>(grid.n), 0.0);
        for (int i = grid.first_inside(-1.0); i <= grid.last_inside(1.0); ++i)
            state.u1[static_cast<std::size_t>(i)] = cosine_profile(0.8, 1.0)(grid.x(i));
        const Trajectory coupled = sim.run(std::move(state));
        const oracle::ScalarTrajectory scalar = oracle::scalar_free_boundary_run(
            grid, k, cfg.d1, cfg.mu1, 1.0, 1.0, 1.0, cosine_profile(0.8, 1.0), sim.dt(),
            cfg.t_final, cfg.picard_tol, cfg.picard_max_iters);
        if (!coupled.completed() || scalar.t.size() != coupled.rows.size() ||
            scalar.u.size() != coupled.snapshots.size()) {
            reduction_sup = 1e300;
        } else {
            for (std::size_t s = 0; s < scalar.t.size(); ++s) {
                reduction_sup = std::max(reduction_sup, std::abs(scalar.g[s] - coupled.rows[s].g));
                reduction_sup = std::max(reduction_sup, std::abs(scalar.h[s] - coupled.rows[s].h));
            }
            for (std::size_t s = 0; s < coupled.snapshots.size(); ++s)
                for (std::size_t i = 0; i < coupled.snapshots[s].u1.size(); ++i)
                    reduction_sup = std::max(
                        reduction_sup, std::abs(coupled.snapshots[s].u1[i] - scalar.u[s][i]));
        }
        ok = ok && reduction_sup <= 1e-10;
        detail << "single-species sup difference " << format_float(reduction_sup);
    }
    rep.add({"comparison-principle", "ordering against the fixture and the scalar reduction", ok,
             std::max(fixture_violation, reduction_sup), 1e-6, detail.str()});
}

// ----------------------------------------------------------------------
// numerics hygiene

void check_numerics(Reporter &rep) {
    bool ok = true;
    std::ostringstream detail;

    // (a) fast vs direct convolution
    double conv_diff = 0.0;
    {
        std::mt19937_64 rng(4242);
        std::uniform_real_distribution<double> draw(0.0, 1.0);
        const struct {
            double half, dx, sigma;
            bool gauss;
        } cases[] = {{4.0, 0.05, 1.0, false}, {4.0, 0.031, 0.8, true}, {6.0, 0.02, 0.7, false}};
        for (const auto &c : cases) {
            const Grid grid = Grid::symmetric(c.half, c.dx);
            const Kernel kernel = c.gauss ? Kernel::gaussian(c.sigma, 6.0 * c.sigma, c.dx)
                                          : Kernel::triangular(c.sigma, c.dx);
            Convolver direct(grid, kernel, ConvPath::Direct);
            Convolver fft(grid, kernel, ConvPath::Fft);
            std::vector<double> u(static_cast<std::size_t>(grid.n));
            for (auto &v : u)
                v = draw(rng);
            std::vector<double> a(u.size()), b(u.size());
            direct.apply(u, a);
            fft.apply(u, b);
            for (std::size_t i = 0; i < u.size(); ++i)
                conv_diff = std::max(conv_diff, std::abs(a[i] - b[i]));
        }
        ok = ok && conv_diff <= 1e-10;
        detail << "conv paths diff " << format_float(conv_diff) << "; ";
    }

    // (b)+(c) step-size and grid refinement orders of h(t_final) on the
    // smooth benchmark. The step-size study runs on a fine grid so the
    // node-crossing quantization of the moving boundary sits far below the
    // truncation differences; the grid study uses resolutions where the
    // spatial error still dominates that quantization floor.
    const auto boundary_at = [&](double dx, double dt, double t_final) {
        ExperimentConfig cfg = simulate_config(competition_benchmark(), 1.0, 1.0, 1.0, 0.8, dx,
                                               6.0, t_final);
        cfg.solver.dt = dt;
        cfg.solver.picard_tol = 1e-13;
        const SimulationOutcome outcome = run_simulation(cfg);
        return outcome.trajectory.rows.back().h;
    };
    double dt_ratio = 0.0, dx_ratio = 0.0;
    {
        const double h1 = boundary_at(0.0125, 0.02, 4.0);
        const double h2 = boundary_at(0.0125, 0.01, 4.0);
        const double h3 = boundary_at(0.0125, 0.005, 4.0);
        dt_ratio = std::abs(h1 - h2) / std::abs(h2 - h3);
        ok = ok && dt_ratio >= 1.7 && dt_ratio <= 2.3;
        detail << "dt-halving ratio " << format_float(dt_ratio) << "; ";
    }
    {
        const double h1 = boundary_at(0.2, 0.01, 2.0);
        const double h2 = boundary_at(0.1, 0.01, 2.0);
        const double h3 = boundary_at(0.05, 0.01, 2.0);
        dx_ratio = std::abs(h1 - h2) / std::abs(h2 - h3);
        ok = ok && dx_ratio >= 3.4 && dx_ratio <= 4.6;
        detail << "dx-halving ratio " << format_float(dx_ratio) << "; ";
    }

    // (d) byte-identical reruns
    bool deterministic = false;
    {
        ExperimentConfig cfg = simulate_config(competition_benchmark(), 1.0, 1.0, 1.0, 0.8, 0.05,
                                               5.0, 1.2, 10);
        const fs::path dir1 = fs::temp_directory_path() / "frontspread_verify_det1";
        const fs::path dir2 = fs::temp_directory_path() / "frontspread_verify_det2";
        fs::remove_all(dir1);
        fs::remove_all(dir2);
        (void)dispatch(cfg, dir1.string());
        (void)dispatch(cfg, dir2.string());
        const auto slurp = [](const fs::path &p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream os;
            os << in.rdbuf();
            return os.str();
        };
        deterministic = slurp(dir1 / "trajectory.csv") == slurp(dir2 / "trajectory.csv") &&
                        slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json") &&
                        slurp(dir1 / "snapshots/snap_000001.csv") ==
                            slurp(dir2 / "snapshots/snap_000001.csv");
        ok = ok && deterministic;
        detail << "reruns byte-identical: " << (deterministic ? "yes" : "NO");
        fs::remove_all(dir1);
        fs::remove_all(dir2);
    }
    rep.add({"numerics-hygiene", "convolution paths, refinement orders, determinism", ok,
             conv_diff, 1e-10, detail.str()});
}

} // namespace

std::vector<CheckResult> run_verification(VerifyLevel level, std::ostream *progress) {
    Reporter rep;
    rep.out = progress;

    check_kernel_contract(rep);
    check_growth_contract(rep);
    check_spectral_oracle(rep);
    check_critical_length(rep);
    check_recurrences(rep);

    if (level == VerifyLevel::Full) {
        check_bounds_and_monotonicity(rep);
        check_benchmarks(rep);
        DichotomyContext ctx;
        check_dichotomy(rep, ctx);
        check_mu_bracket(rep, ctx);
        check_comparison(rep);
        check_numerics(rep);
    }
    return rep.results;
}

} // namespace frontspread
