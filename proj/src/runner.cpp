#include "frontspread/runner.hpp"

#include "frontspread/errors.hpp"
#include "frontspread/spectral.hpp"
#include "frontspread/verify.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace frontspread {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fnv1a_hex(const std::string &bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_file(const std::string &path, const std::string &contents, RunRecord &record) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail_config("runner: cannot write '" + path + "'");
    out << contents;
    record.manifest.emplace_back(path, fnv1a_hex(contents));
}

std::string trajectory_csv(const Trajectory &traj) {
    std::ostringstream os;
    os << "t,g,h,gprime,hprime,mass1,mass2,max1,max2\n";
    for (const auto &row : traj.rows) {
        os << format_float(row.t) << ',' << format_float(row.g) << ',' << format_float(row.h)
           << ',' << format_float(row.gp) << ',' << format_float(row.hp) << ','
           << format_float(row.mass1) << ',' << format_float(row.mass2) << ','
           << format_float(row.max1) << ',' << format_float(row.max2) << '\n';
    }
    return os.str();
}

std::string snapshot_csv(const Grid &grid, const FieldSnapshot &snap) {
    std::ostringstream os;
    os << "x,u1,u2\n";
    for (int i = 0; i < grid.n; ++i) {
        os << format_float(grid.x(i)) << ',' << format_float(snap.u1[static_cast<std::size_t>(i)])
           << ',' << format_float(snap.u2[static_cast<std::size_t>(i)]) << '\n';
    }
    return os.str();
}

json classification_json(const Classification &c) {
    json j;
    j["verdict"] = verdict_name(c.verdict);
    j["final_range"] = c.final_range;
    j["final_max1"] = c.final_max1;
    j["final_max2"] = c.final_max2;
    j["window_speed_max"] = c.window_speed_max;
    j["window_speed_min"] =
        std::isfinite(c.window_speed_min) ? json(c.window_speed_min) : json(nullptr);
    j["ell_star"] = c.ell_star ? json(*c.ell_star) : json(nullptr);
    j["compact_support_warning"] = c.compact_support_warning;
    if (!c.note.empty())
        j["note"] = c.note;
    return j;
}

} // namespace

void write_trajectory_csv(const std::string &path, const Trajectory &trajectory) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail_config("runner: cannot write '" + path + "'");
    out << trajectory_csv(trajectory);
}

void write_snapshot_csv(const std::string &path, const Grid &grid, const FieldSnapshot &snap) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail_config("runner: cannot write '" + path + "'");
    out << snapshot_csv(grid, snap);
}

SimulationOutcome run_simulation(const ExperimentConfig &cfg,
                                 std::optional<double> known_ell_star) {
    const Grid grid = make_grid(cfg);
    const GrowthModel model = make_model(cfg.model);
    const Kernel k1 = make_kernel(cfg.kernel1, cfg.grid.dx);
    const Kernel k2 = make_kernel(cfg.kernel2, cfg.grid.dx);
    const SolverConfig solver = make_solver(cfg.solver, cfg.outputs.snapshot_every);
    Simulator sim(grid, model, k1, k2, solver);
    const auto [u10, u20] = make_profiles(cfg.initial);
    FieldState state = sim.initialize(cfg.initial.h0, u10, u20);

    SimulationOutcome outcome;
    outcome.trajectory = sim.run(std::move(state));

    const auto &p = model.params();
    if (known_ell_star) {
        outcome.ell_star = known_ell_star;
        outcome.ell_star_defined = true;
    } else if (p.a1 < cfg.solver.d1 && p.a2 < cfg.solver.d2) {
        const EllStarResult es = ell_star(cfg.solver.d1, p.a1, k1, cfg.solver.d2, p.a2, k2,
                                          cfg.critical_length.tol, cfg.critical_length.n_eig);
        outcome.ell_star = es.ell_star;
        outcome.ell_star_defined = true;
    }
    if (outcome.trajectory.completed()) {
        const bool compact = !k1.strictly_positive() || !k2.strictly_positive();
        ClassifyTols tols;
        tols.vanish_tol = cfg.classify.vanish_tol;
        tols.speed_tol = cfg.classify.speed_tol;
        tols.range_frac = cfg.classify.range_frac;
        tols.window_frac = cfg.classify.window_frac;
        outcome.classification = classify(outcome.trajectory, outcome.ell_star, tols, compact);
    }
    return outcome;
}

MuRun mu_run_from_outcome(const SimulationOutcome &outcome, double mu_total, double t_final,
                          double ell_star) {
    MuRun run;
    run.mu_total = mu_total;
    run.t_final = t_final;
    run.verdict = Verdict::Undetermined;
    const Trajectory &traj = outcome.trajectory;
    if (!traj.rows.empty())
        run.final_range = traj.rows.back().h - traj.rows.back().g;
    if (traj.completed()) {
        run.verdict = outcome.classification.verdict;
        return run;
    }
    if (traj.abort == AbortReason::AmbientMargin && run.final_range > ell_star * 1.05)
        run.verdict = Verdict::Spreading;
    return run;
}

namespace {

json trajectory_summary(const Trajectory &traj) {
    json j;
    j["aborted"] = !traj.completed();
    j["abort_reason"] = abort_reason_name(traj.abort);
    if (!traj.abort_detail.empty())
        j["abort_detail"] = traj.abort_detail;
    j["dt"] = traj.dt;
    j["bound_a1"] = traj.bound_a1;
    j["bound_a2"] = traj.bound_a2;
    j["lipschitz"] = traj.lipschitz;
    j["peak_u1"] = traj.peak_u1;
    j["peak_u2"] = traj.peak_u2;
    j["undershoot"] = traj.undershoot;
    if (!traj.rows.empty()) {
        const auto &last = traj.rows.back();
        j["t_end"] = last.t;
        j["g_end"] = last.g;
        j["h_end"] = last.h;
        j["range_end"] = last.h - last.g;
        j["mass1_end"] = last.mass1;
        j["mass2_end"] = last.mass2;
        j["max1_end"] = last.max1;
        j["max2_end"] = last.max2;
    }
    double max_ratio = 0;
    for (double r : traj.picard_ratios)
        max_ratio = std::max(max_ratio, r);
    int max_iters = 0;
    for (int i : traj.picard_iters)
        max_iters = std::max(max_iters, i);
    j["picard_ratio_max"] = max_ratio;
    j["picard_iters_max"] = max_iters;
    return j;
}

int dispatch_simulate(const ExperimentConfig &cfg, const std::string &dir, RunRecord &record) {
    const SimulationOutcome outcome = run_simulation(cfg);
    const Trajectory &traj = outcome.trajectory;

    write_file(dir + "/trajectory.csv", trajectory_csv(traj), record);
    if (!traj.snapshots.empty()) {
        fs::create_directories(dir + "/snapshots");
        for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof(name), "/snapshots/snap_%06zu.csv", k);
            write_file(dir + name, snapshot_csv(traj.grid, traj.snapshots[k]), record);
        }
    }

    json summary = trajectory_summary(traj);
    summary["ell_star"] = outcome.ell_star ? json(*outcome.ell_star) : json(nullptr);
    if (traj.completed()) {
        summary["classification"] = classification_json(outcome.classification);
        // the verdict rests on finite-time proxy rules; record the knobs
        summary["classification"]["tolerances"] = {{"vanish_tol", cfg.classify.vanish_tol},
                                                   {"speed_tol", cfg.classify.speed_tol},
                                                   {"range_frac", cfg.classify.range_frac},
                                                   {"window_frac", cfg.classify.window_frac}};
    }
    record.summary = summary;
    write_file(dir + "/summary.json", summary.dump(2) + "\n", record);
    return traj.completed() ? 0 : 3;
}

int dispatch_eigen(const ExperimentConfig &cfg, const std::string &dir, RunRecord &record) {
    const Kernel kernel = make_kernel(cfg.kernel1, cfg.grid.dx);
    const SpectralProblem problem = SpectralProblem::constant_theta(
        cfg.eigen.d, kernel, cfg.eigen.a, cfg.eigen.b, cfg.eigen.theta, cfg.eigen.n_eig);
    const EigenResult result = principal_eigenvalue(problem);

    std::ostringstream os;
    os << "x,phi\n";
    for (int i = 0; i < problem.n_eig; ++i)
        os << format_float(problem.node(i)) << ','
           << format_float(result.eigenfunction[static_cast<std::size_t>(i)]) << '\n';
    write_file(dir + "/eigenfunction.csv", os.str(), record);

    json j;
    j["lambda_p"] = result.lambda_p;
    j["iterations"] = result.iterations;
    j["d"] = cfg.eigen.d;
    j["theta"] = cfg.eigen.theta;
    j["interval"] = {cfg.eigen.a, cfg.eigen.b};
    j["n_eig"] = cfg.eigen.n_eig;
    record.summary = j;
    write_file(dir + "/eigen.json", j.dump(2) + "\n", record);
    return 0;
}

int dispatch_critical_length(const ExperimentConfig &cfg, const std::string &dir,
                             RunRecord &record) {
    const Kernel k1 = make_kernel(cfg.kernel1, cfg.grid.dx);
    const Kernel k2 = make_kernel(cfg.kernel2, cfg.grid.dx);
    const EllStarResult es =
        ell_star(cfg.solver.d1, cfg.model.a1, k1, cfg.solver.d2, cfg.model.a2, k2,
                 cfg.critical_length.tol, cfg.critical_length.n_eig);
    json j;
    j["ell1"] = es.ell1;
    j["ell2"] = es.ell2;
    j["ell_star"] = es.ell_star;
    record.summary = j;
    write_file(dir + "/critical_length.json", j.dump(2) + "\n", record);
    return 0;
}

int dispatch_mu_sweep(const ExperimentConfig &cfg, const std::string &dir, RunRecord &record) {
    std::optional<double> ellstar;
    {
        const Kernel k1 = make_kernel(cfg.kernel1, cfg.grid.dx);
        const Kernel k2 = make_kernel(cfg.kernel2, cfg.grid.dx);
        if (cfg.model.a1 < cfg.solver.d1 && cfg.model.a2 < cfg.solver.d2)
            ellstar = ell_star(cfg.solver.d1, cfg.model.a1, k1, cfg.solver.d2, cfg.model.a2, k2,
                               cfg.critical_length.tol, cfg.critical_length.n_eig)
                          .ell_star;
    }
    if (!ellstar)
        throw Error(ErrorCode::Unsupported,
                    "mu-sweep: spreading is unconditional here (a_i >= d_i); no threshold exists");

    const auto launch = [&](double mu_total) {
        ExperimentConfig sub = cfg;
        sub.solver.mu1 = 0.5 * mu_total;
        sub.solver.mu2 = 0.5 * mu_total;
        sub.outputs.snapshot_every = 0;
        double t_final = cfg.solver.t_final;
        for (;;) {
            sub.solver.t_final = t_final;
            const SimulationOutcome outcome = run_simulation(sub, ellstar);
            const MuRun run = mu_run_from_outcome(outcome, mu_total, t_final, *ellstar);
            if (run.verdict != Verdict::Undetermined)
                return run;
            if (cfg.mu_sweep.t_final_cap <= 0 || t_final * 2 > cfg.mu_sweep.t_final_cap)
                return run;
            t_final *= 2; // widen the horizon and retry
        }
    };

    int parallelism = 1;
    if (const char *env = std::getenv("FRONTSPREAD_PARALLEL"))
        parallelism = std::max(1, std::atoi(env));

    json j;
    int code = 0;
    try {
        const MuBracket bracket = mu_threshold(launch, cfg.mu_sweep.mu_lo, cfg.mu_sweep.mu_hi,
                                               cfg.mu_sweep.budget, cfg.mu_sweep.target_ratio,
                                               parallelism);
        j["bracket"] = {{"mu_lo", bracket.mu_lo}, {"mu_hi", bracket.mu_hi}};
        j["monotone_consistent"] = bracket.monotone_consistent;
        j["ell_star"] = *ellstar;
        json runs = json::array();
        for (const auto &r : bracket.runs)
            runs.push_back({{"mu_total", r.mu_total},
                            {"verdict", verdict_name(r.verdict)},
                            {"final_range", r.final_range},
                            {"t_final", r.t_final}});
        j["runs"] = runs;
    } catch (const Error &e) {
        if (e.code() != ErrorCode::Undetermined)
            throw;
        j["error"] = e.what();
        code = 4;
    }
    record.summary = j;
    write_file(dir + "/mu_sweep.json", j.dump(2) + "\n", record);
    return code;
}

int dispatch_asymptotics(const ExperimentConfig &cfg, const std::string &dir, RunRecord &record) {
    const GrowthModel model = make_model(cfg.model);
    const IterationSequences seq = iterate_bounds(model, cfg.asymptotics.n_iters);
    const auto [u1, u2] = coexistence_limit(model);

    std::ostringstream os;
    os << "i,a_upper,b_lower,a_lower,b_upper\n";
    for (std::size_t i = 0; i < seq.a_upper.size(); ++i) {
        os << i + 1 << ',' << format_float(seq.a_upper[i]) << ',' << format_float(seq.b_lower[i])
           << ',' << (i < seq.a_lower.size() ? format_float(seq.a_lower[i]) : "") << ','
           << (i < seq.b_upper.size() ? format_float(seq.b_upper[i]) : "") << '\n';
    }
    write_file(dir + "/sequences.csv", os.str(), record);

    json j;
    j["regime"] = seq.regime == Regime::WeakCompetition ? "weak_competition" : "weak_predation";
    j["limit_u1"] = u1;
    j["limit_u2"] = u2;
    j["q"] = seq.q;
    if (seq.regime == Regime::WeakCompetition)
        j["p"] = seq.p;
    else
        j["a"] = seq.a;
    j["a_upper_last"] = seq.a_upper.back();
    j["b_lower_last"] = seq.b_lower.back();
    record.summary = j;
    write_file(dir + "/asymptotics.json", j.dump(2) + "\n", record);
    return 0;
}

int dispatch_verify(const ExperimentConfig &cfg, const std::string &dir, RunRecord &record) {
    const VerifyLevel level =
        cfg.verify.level == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
    const std::vector<CheckResult> results = run_verification(level, &std::cout);
    json j = json::array();
    bool all_pass = true;
    for (const auto &r : results) {
        j.push_back({{"id", r.id},
                     {"pass", r.pass},
                     {"measured", r.measured},
                     {"threshold", r.threshold},
                     {"detail", r.detail}});
        all_pass = all_pass && r.pass;
    }
    record.summary = {{"checks", j}, {"all_pass", all_pass}};
    write_file(dir + "/verify.json", record.summary.dump(2) + "\n", record);
    return all_pass ? 0 : 1;
}

} // namespace

RunRecord dispatch(const ExperimentConfig &cfg, const std::string &out_dir) {
    const auto start = std::chrono::steady_clock::now();
    RunRecord record;
    record.version = kVersion;
    record.config_hash = fnv1a_hex(cfg.resolved().dump());

    const std::string dir = out_dir.empty() ? cfg.outputs.dir : out_dir;
    fs::create_directories(dir);

    if (cfg.kind == "simulate")
        record.exit_code = dispatch_simulate(cfg, dir, record);
    else if (cfg.kind == "eigen")
        record.exit_code = dispatch_eigen(cfg, dir, record);
    else if (cfg.kind == "critical-length")
        record.exit_code = dispatch_critical_length(cfg, dir, record);
    else if (cfg.kind == "mu-sweep")
        record.exit_code = dispatch_mu_sweep(cfg, dir, record);
    else if (cfg.kind == "asymptotics")
        record.exit_code = dispatch_asymptotics(cfg, dir, record);
    else if (cfg.kind == "verify")
        record.exit_code = dispatch_verify(cfg, dir, record);
    else
        fail_config("runner: unknown kind '" + cfg.kind + "'");

    const auto stop = std::chrono::steady_clock::now();
    record.wall_clock_s = std::chrono::duration<double>(stop - start).count();

    json rec;
    rec["version"] = record.version;
    rec["config_hash"] = record.config_hash;
    rec["wall_clock_s"] = record.wall_clock_s;
    rec["config"] = cfg.resolved();
    rec["exit_code"] = record.exit_code;
    json manifest = json::array();
    for (const auto &[path, hash] : record.manifest)
        manifest.push_back({{"path", path}, {"hash", hash}});
    rec["outputs"] = manifest;
    rec["summary"] = record.summary;
    std::ofstream out(dir + "/run_record.json", std::ios::binary);
    out << rec.dump(2) << "\n";
    return record;
}

} // namespace frontspread
