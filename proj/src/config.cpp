#include "frontspread/config.hpp"

#include "frontspread/errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

namespace frontspread {

namespace {

using nlohmann::json;

/// Collects every violation before failing so a bad config is reported once,
/// completely.
struct Checker {
    std::vector<std::string> problems;

    void require(bool ok, const std::string &msg) {
        if (!ok)
            problems.push_back(msg);
    }
    void known_keys(const json &j, const std::string &block, const std::set<std::string> &allowed) {
        if (!j.is_object()) {
            problems.push_back(block + ": expected an object");
            return;
        }
        for (const auto &item : j.items())
            if (!allowed.count(item.key()))
                problems.push_back(block + ": unknown key '" + item.key() + "'");
    }
    void finish() const {
        if (problems.empty())
            return;
        std::ostringstream os;
        os << "config: " << problems.size() << " problem(s):";
        for (const auto &p : problems)
            os << "\n  - " << p;
        fail_config(os.str());
    }
};

template <typename T>
T get_or(const json &j, const std::string &key, T fallback) {
    if (j.contains(key))
        return j.at(key).get<T>();
    return fallback;
}

KernelSpec parse_kernel(const json &j, const std::string &block, Checker &check) {
    check.known_keys(j, block, {"family", "sigma", "cutoff", "path"});
    KernelSpec spec;
    spec.family = get_or<std::string>(j, "family", spec.family);
    spec.sigma = get_or<double>(j, "sigma", spec.sigma);
    spec.cutoff = get_or<double>(j, "cutoff", 6.0 * spec.sigma);
    spec.path = get_or<std::string>(j, "path", spec.path);
    check.require(spec.family == "triangular" || spec.family == "gaussian" ||
                      spec.family == "tabulated",
                  block + ": family must be triangular, gaussian or tabulated");
    check.require(spec.sigma > 0, block + ": sigma must be positive");
    check.require(spec.cutoff > 0, block + ": cutoff must be positive");
    if (spec.family == "tabulated") {
        check.require(!spec.path.empty(), block + ": tabulated kernels need a path");
        if (!spec.path.empty())
            check.require(std::filesystem::exists(spec.path),
                          block + ": file '" + spec.path + "' does not exist");
    }
    return spec;
}

std::vector<std::vector<double>> read_csv_columns(const std::string &path, std::size_t columns) {
    std::ifstream in(path);
    if (!in)
        fail_config("config: cannot open CSV file '" + path + "'");
    std::vector<std::vector<double>> cols(columns);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        if (line_no == 1 && line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos)
            continue; // header row
        std::istringstream ls(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ls, cell, ',') && c < columns) {
            try {
                cols[c].push_back(std::stod(cell));
            } catch (const std::exception &) {
                std::ostringstream os;
                os << "config: CSV '" << path << "' line " << line_no << ": bad number '" << cell
                   << "'";
                fail_config(os.str());
            }
            ++c;
        }
        if (c != columns) {
            std::ostringstream os;
            os << "config: CSV '" << path << "' line " << line_no << ": expected " << columns
               << " columns";
            fail_config(os.str());
        }
    }
    if (cols[0].empty())
        fail_config("config: CSV '" + path + "' contains no data rows");
    return cols;
}

} // namespace

ExperimentConfig parse_config(const json &j) {
    Checker check;
    check.known_keys(j, "config",
                     {"schema_version", "kind", "kernel", "kernel2", "model", "solver", "grid",
                      "initial", "outputs", "eigen", "critical_length", "mu_sweep", "asymptotics",
                      "verify", "classify"});
    check.finish();

    ExperimentConfig cfg;
    cfg.schema_version = get_or<int>(j, "schema_version", 1);
    if (cfg.schema_version != 1)
        fail_config("config: unsupported schema_version (this build reads version 1)");
    cfg.kind = get_or<std::string>(j, "kind", cfg.kind);

    static const std::set<std::string> kinds = {"simulate",        "eigen",       "critical-length",
                                                "mu-sweep",        "asymptotics", "verify"};
    check.require(kinds.count(cfg.kind) > 0, "config: unknown kind '" + cfg.kind + "'");

    if (j.contains("kernel"))
        cfg.kernel1 = parse_kernel(j.at("kernel"), "kernel", check);
    if (j.contains("kernel2")) {
        cfg.kernel2 = parse_kernel(j.at("kernel2"), "kernel2", check);
        cfg.kernel2_given = true;
    } else {
        cfg.kernel2 = cfg.kernel1;
    }

    if (j.contains("model")) {
        const json &m = j.at("model");
        check.known_keys(m, "model", {"kind", "a1", "b1", "c1", "a2", "b2", "c2"});
        cfg.model.kind = get_or<std::string>(m, "kind", cfg.model.kind);
        cfg.model.a1 = get_or<double>(m, "a1", cfg.model.a1);
        cfg.model.b1 = get_or<double>(m, "b1", cfg.model.b1);
        cfg.model.c1 = get_or<double>(m, "c1", cfg.model.c1);
        cfg.model.a2 = get_or<double>(m, "a2", cfg.model.a2);
        cfg.model.b2 = get_or<double>(m, "b2", cfg.model.b2);
        cfg.model.c2 = get_or<double>(m, "c2", cfg.model.c2);
        check.require(cfg.model.kind == "competition" || cfg.model.kind == "predator_prey",
                      "model: kind must be competition or predator_prey");
        for (double v : {cfg.model.a1, cfg.model.b1, cfg.model.c1, cfg.model.a2, cfg.model.b2,
                         cfg.model.c2})
            check.require(v > 0 && std::isfinite(v), "model: all rates must be strictly positive");
    }

    if (j.contains("solver")) {
        const json &s = j.at("solver");
        check.known_keys(s, "solver",
                         {"d1", "d2", "mu1", "mu2", "dt", "picard_tol", "picard_max_iters",
                          "t_final", "conv_path", "undershoot_limit"});
        cfg.solver.d1 = get_or<double>(s, "d1", cfg.solver.d1);
        cfg.solver.d2 = get_or<double>(s, "d2", cfg.solver.d2);
        cfg.solver.mu1 = get_or<double>(s, "mu1", cfg.solver.mu1);
        cfg.solver.mu2 = get_or<double>(s, "mu2", cfg.solver.mu2);
        cfg.solver.dt = get_or<double>(s, "dt", cfg.solver.dt);
        cfg.solver.picard_tol = get_or<double>(s, "picard_tol", cfg.solver.picard_tol);
        cfg.solver.picard_max_iters = get_or<int>(s, "picard_max_iters", cfg.solver.picard_max_iters);
        cfg.solver.t_final = get_or<double>(s, "t_final", cfg.solver.t_final);
        cfg.solver.conv_path = get_or<std::string>(s, "conv_path", cfg.solver.conv_path);
        cfg.solver.undershoot_limit = get_or<double>(s, "undershoot_limit", cfg.solver.undershoot_limit);
        check.require(cfg.solver.d1 > 0 && cfg.solver.d2 > 0, "solver: dispersal rates must be positive");
        check.require(cfg.solver.mu1 > 0 && cfg.solver.mu2 > 0,
                      "solver: boundary coefficients must be positive");
        check.require(cfg.solver.dt >= 0, "solver: dt must be nonnegative (0 = auto)");
        check.require(cfg.solver.picard_tol > 0, "solver: picard_tol must be positive");
        check.require(cfg.solver.picard_max_iters >= 2, "solver: picard_max_iters must be >= 2");
        check.require(cfg.solver.t_final > 0, "solver: t_final must be positive");
        check.require(cfg.solver.conv_path == "auto" || cfg.solver.conv_path == "direct" ||
                          cfg.solver.conv_path == "fft" || cfg.solver.conv_path == "serial",
                      "solver: conv_path must be auto, direct, fft or serial");
    }

    if (j.contains("grid")) {
        const json &g = j.at("grid");
        check.known_keys(g, "grid", {"dx", "half_width"});
        cfg.grid.dx = get_or<double>(g, "dx", cfg.grid.dx);
        cfg.grid.half_width = get_or<double>(g, "half_width", cfg.grid.half_width);
        check.require(cfg.grid.dx > 0, "grid: dx must be positive");
        check.require(cfg.grid.half_width >= 0, "grid: half_width must be nonnegative (0 = auto)");
    }

    if (j.contains("initial")) {
        const json &i = j.at("initial");
        check.known_keys(i, "initial", {"profile", "amplitude1", "amplitude2", "h0", "csv"});
        cfg.initial.profile = get_or<std::string>(i, "profile", cfg.initial.profile);
        cfg.initial.amplitude1 = get_or<double>(i, "amplitude1", cfg.initial.amplitude1);
        cfg.initial.amplitude2 = get_or<double>(i, "amplitude2", cfg.initial.amplitude2);
        cfg.initial.h0 = get_or<double>(i, "h0", cfg.initial.h0);
        cfg.initial.csv = get_or<std::string>(i, "csv", cfg.initial.csv);
        check.require(cfg.initial.profile == "cosine" || cfg.initial.profile == "parabola" ||
                          cfg.initial.profile == "tent" || cfg.initial.profile == "csv",
                      "initial: profile must be cosine, parabola, tent or csv");
        check.require(cfg.initial.amplitude1 > 0 && cfg.initial.amplitude2 > 0,
                      "initial: amplitudes must be positive");
        check.require(cfg.initial.h0 > 0, "initial: h0 must be positive");
        if (cfg.initial.profile == "csv") {
            check.require(!cfg.initial.csv.empty(), "initial: csv profiles need a path");
            if (!cfg.initial.csv.empty())
                check.require(std::filesystem::exists(cfg.initial.csv),
                              "initial: file '" + cfg.initial.csv + "' does not exist");
        }
    }

    if (j.contains("outputs")) {
        const json &o = j.at("outputs");
        check.known_keys(o, "outputs", {"dir", "snapshot_every"});
        cfg.outputs.dir = get_or<std::string>(o, "dir", cfg.outputs.dir);
        cfg.outputs.snapshot_every = get_or<int>(o, "snapshot_every", cfg.outputs.snapshot_every);
        check.require(cfg.outputs.snapshot_every >= 0, "outputs: snapshot_every must be >= 0");
    }

    if (j.contains("eigen")) {
        const json &e = j.at("eigen");
        check.known_keys(e, "eigen", {"d", "theta", "a", "b", "n_eig"});
        cfg.eigen.d = get_or<double>(e, "d", cfg.eigen.d);
        cfg.eigen.theta = get_or<double>(e, "theta", cfg.eigen.theta);
        cfg.eigen.a = get_or<double>(e, "a", cfg.eigen.a);
        cfg.eigen.b = get_or<double>(e, "b", cfg.eigen.b);
        cfg.eigen.n_eig = get_or<int>(e, "n_eig", cfg.eigen.n_eig);
        check.require(cfg.eigen.a < cfg.eigen.b, "eigen: interval must satisfy a < b");
        check.require(cfg.eigen.n_eig >= 64, "eigen: n_eig must be at least 64");
        check.require(cfg.eigen.d >= 0, "eigen: d must be nonnegative");
    }

    if (j.contains("critical_length")) {
        const json &c = j.at("critical_length");
        check.known_keys(c, "critical_length", {"tol", "n_eig"});
        cfg.critical_length.tol = get_or<double>(c, "tol", cfg.critical_length.tol);
        cfg.critical_length.n_eig = get_or<int>(c, "n_eig", cfg.critical_length.n_eig);
        check.require(cfg.critical_length.tol > 0, "critical_length: tol must be positive");
        check.require(cfg.critical_length.n_eig >= 64, "critical_length: n_eig must be >= 64");
    }

    if (j.contains("mu_sweep")) {
        const json &m = j.at("mu_sweep");
        check.known_keys(m, "mu_sweep", {"mu_lo", "mu_hi", "budget", "target_ratio", "t_final_cap"});
        cfg.mu_sweep.mu_lo = get_or<double>(m, "mu_lo", cfg.mu_sweep.mu_lo);
        cfg.mu_sweep.mu_hi = get_or<double>(m, "mu_hi", cfg.mu_sweep.mu_hi);
        cfg.mu_sweep.budget = get_or<int>(m, "budget", cfg.mu_sweep.budget);
        cfg.mu_sweep.target_ratio = get_or<double>(m, "target_ratio", cfg.mu_sweep.target_ratio);
        cfg.mu_sweep.t_final_cap = get_or<double>(m, "t_final_cap", cfg.mu_sweep.t_final_cap);
        check.require(cfg.mu_sweep.mu_lo > 0 && cfg.mu_sweep.mu_hi > cfg.mu_sweep.mu_lo,
                      "mu_sweep: need 0 < mu_lo < mu_hi");
        check.require(cfg.mu_sweep.budget >= 1, "mu_sweep: budget must be >= 1");
        check.require(cfg.mu_sweep.target_ratio > 1, "mu_sweep: target_ratio must exceed 1");
    }

    if (j.contains("asymptotics")) {
        const json &a = j.at("asymptotics");
        check.known_keys(a, "asymptotics", {"n_iters"});
        cfg.asymptotics.n_iters = get_or<int>(a, "n_iters", cfg.asymptotics.n_iters);
        check.require(cfg.asymptotics.n_iters >= 1, "asymptotics: n_iters must be >= 1");
    }

    if (j.contains("verify")) {
        const json &v = j.at("verify");
        check.known_keys(v, "verify", {"level"});
        cfg.verify.level = get_or<std::string>(v, "level", cfg.verify.level);
        check.require(cfg.verify.level == "quick" || cfg.verify.level == "full",
                      "verify: level must be quick or full");
    }

    if (j.contains("classify")) {
        const json &c = j.at("classify");
        check.known_keys(c, "classify", {"vanish_tol", "speed_tol", "range_frac", "window_frac"});
        cfg.classify.vanish_tol = get_or<double>(c, "vanish_tol", cfg.classify.vanish_tol);
        cfg.classify.speed_tol = get_or<double>(c, "speed_tol", cfg.classify.speed_tol);
        cfg.classify.range_frac = get_or<double>(c, "range_frac", cfg.classify.range_frac);
        cfg.classify.window_frac = get_or<double>(c, "window_frac", cfg.classify.window_frac);
        check.require(cfg.classify.vanish_tol > 0 && cfg.classify.speed_tol > 0,
                      "classify: tolerances must be positive");
        check.require(cfg.classify.range_frac >= 0, "classify: range_frac must be nonnegative");
        check.require(cfg.classify.window_frac > 0 && cfg.classify.window_frac <= 1,
                      "classify: window_frac must lie in (0, 1]");
    }

    check.finish();

    // Cross-field check: a user-supplied dt must respect the contraction
    // bound implied by the initial amplitudes.
    if (cfg.kind == "simulate" || cfg.kind == "mu-sweep") {
        const GrowthModel model = make_model(cfg.model);
        const auto [A1, A2] = model.a_priori_bounds(cfg.initial.amplitude1, cfg.initial.amplitude2);
        const double L = model.lipschitz_constant(A1, A2);
        if (cfg.solver.dt > 0) {
            const double kappa = std::max(cfg.solver.d1, cfg.solver.d2) + L;
            const double bound = contraction_dt_bound(std::max(cfg.solver.d1, cfg.solver.d2), L);
            if (cfg.solver.dt * kappa * std::exp(2.0 * kappa * cfg.solver.dt) > 0.5) {
                std::ostringstream os;
                os << "solver: dt = " << cfg.solver.dt
                   << " violates the contraction bound dt * k * exp(2 k dt) <= 1/2 with k = "
                   << kappa << "; largest admissible dt is " << bound;
                fail_config(os.str());
            }
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        fail_config("config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        fail_config("config: JSON parse error in '" + path + "': " + e.what());
    }
    ExperimentConfig cfg = parse_config(j);
    cfg.source_path = path;
    return cfg;
}

nlohmann::json ExperimentConfig::resolved() const {
    json j;
    j["schema_version"] = schema_version;
    j["kind"] = kind;
    j["kernel"] = {{"family", kernel1.family},
                   {"sigma", kernel1.sigma},
                   {"cutoff", kernel1.cutoff},
                   {"path", kernel1.path}};
    j["kernel2"] = {{"family", kernel2.family},
                    {"sigma", kernel2.sigma},
                    {"cutoff", kernel2.cutoff},
                    {"path", kernel2.path}};
    j["model"] = {{"kind", model.kind}, {"a1", model.a1}, {"b1", model.b1}, {"c1", model.c1},
                  {"a2", model.a2},     {"b2", model.b2}, {"c2", model.c2}};
    j["solver"] = {{"d1", solver.d1},
                   {"d2", solver.d2},
                   {"mu1", solver.mu1},
                   {"mu2", solver.mu2},
                   {"dt", solver.dt},
                   {"picard_tol", solver.picard_tol},
                   {"picard_max_iters", solver.picard_max_iters},
                   {"t_final", solver.t_final},
                   {"conv_path", solver.conv_path},
                   {"undershoot_limit", solver.undershoot_limit}};
    j["grid"] = {{"dx", grid.dx}, {"half_width", grid.half_width}};
    j["initial"] = {{"profile", initial.profile},
                    {"amplitude1", initial.amplitude1},
                    {"amplitude2", initial.amplitude2},
                    {"h0", initial.h0},
                    {"csv", initial.csv}};
    j["outputs"] = {{"dir", outputs.dir}, {"snapshot_every", outputs.snapshot_every}};
    j["eigen"] = {{"d", eigen.d},
                  {"theta", eigen.theta},
                  {"a", eigen.a},
                  {"b", eigen.b},
                  {"n_eig", eigen.n_eig}};
    j["critical_length"] = {{"tol", critical_length.tol}, {"n_eig", critical_length.n_eig}};
    j["mu_sweep"] = {{"mu_lo", mu_sweep.mu_lo},
                     {"mu_hi", mu_sweep.mu_hi},
                     {"budget", mu_sweep.budget},
                     {"target_ratio", mu_sweep.target_ratio},
                     {"t_final_cap", mu_sweep.t_final_cap}};
    j["asymptotics"] = {{"n_iters", asymptotics.n_iters}};
    j["verify"] = {{"level", verify.level}};
    j["classify"] = {{"vanish_tol", classify.vanish_tol},
                     {"speed_tol", classify.speed_tol},
                     {"range_frac", classify.range_frac},
                     {"window_frac", classify.window_frac}};
    return j;
}

Kernel make_kernel(const KernelSpec &spec, double table_spacing) {
    if (spec.family == "triangular")
        return Kernel::triangular(spec.sigma, std::min(table_spacing, spec.sigma));
    if (spec.family == "gaussian")
        return Kernel::gaussian(spec.sigma, spec.cutoff, std::min(table_spacing, spec.cutoff));
    const auto cols = read_csv_columns(spec.path, 2);
    return Kernel::tabulated(cols[0], cols[1]);
}

GrowthModel make_model(const ModelSpec &spec) {
    LotkaVolterraParams p;
    p.a1 = spec.a1;
    p.b1 = spec.b1;
    p.c1 = spec.c1;
    p.a2 = spec.a2;
    p.b2 = spec.b2;
    p.c2 = spec.c2;
    if (spec.kind == "competition")
        return GrowthModel::competition(p);
    if (spec.kind == "predator_prey")
        return GrowthModel::predator_prey(p);
    fail_config("model: unknown kind '" + spec.kind + "'");
}

SolverConfig make_solver(const SolverSpec &spec, int snapshot_every) {
    SolverConfig cfg;
    cfg.d1 = spec.d1;
    cfg.d2 = spec.d2;
    cfg.mu1 = spec.mu1;
    cfg.mu2 = spec.mu2;
    cfg.dt = spec.dt;
    cfg.picard_tol = spec.picard_tol;
    cfg.picard_max_iters = spec.picard_max_iters;
    cfg.t_final = spec.t_final;
    cfg.snapshot_every = snapshot_every;
    cfg.undershoot_limit = spec.undershoot_limit;
    if (spec.conv_path == "direct")
        cfg.conv_path = ConvPath::Direct;
    else if (spec.conv_path == "fft")
        cfg.conv_path = ConvPath::Fft;
    else if (spec.conv_path == "serial")
        cfg.conv_path = ConvPath::Serial;
    else
        cfg.conv_path = ConvPath::Auto;
    return cfg;
}

std::pair<std::function<double(double)>, std::function<double(double)>>
make_profiles(const InitialSpec &spec) {
    const double h0 = spec.h0;
    if (spec.profile == "cosine") {
        const double a1 = spec.amplitude1, a2 = spec.amplitude2;
        return {[a1, h0](double x) { return a1 * std::cos(0.5 * M_PI * x / h0); },
                [a2, h0](double x) { return a2 * std::cos(0.5 * M_PI * x / h0); }};
    }
    if (spec.profile == "parabola") {
        const double a1 = spec.amplitude1, a2 = spec.amplitude2;
        return {[a1, h0](double x) { return a1 * (1.0 - (x / h0) * (x / h0)); },
                [a2, h0](double x) { return a2 * (1.0 - (x / h0) * (x / h0)); }};
    }
    if (spec.profile == "tent") {
        const double a1 = spec.amplitude1, a2 = spec.amplitude2;
        return {[a1, h0](double x) { return a1 * (1.0 - std::abs(x) / h0); },
                [a2, h0](double x) { return a2 * (1.0 - std::abs(x) / h0); }};
    }
    // CSV profile: columns (x, u1, u2), linearly interpolated, zero outside
    // the tabulated range.
    const auto cols = read_csv_columns(spec.csv, 3);
    auto xs = std::make_shared<std::vector<double>>(cols[0]);
    auto us1 = std::make_shared<std::vector<double>>(cols[1]);
    auto us2 = std::make_shared<std::vector<double>>(cols[2]);
    const auto interp = [](const std::vector<double> &xs, const std::vector<double> &ys, double x) {
        if (x <= xs.front() || x >= xs.back())
            return 0.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
        const double alpha = (x - xs[k]) / (xs[k + 1] - xs[k]);
        return (1.0 - alpha) * ys[k] + alpha * ys[k + 1];
    };
    return {[xs, us1, interp](double x) { return interp(*xs, *us1, x); },
            [xs, us2, interp](double x) { return interp(*xs, *us2, x); }};
}

Grid make_grid(const ExperimentConfig &cfg) {
    double half = cfg.grid.half_width;
    const Kernel probe = make_kernel(cfg.kernel1, cfg.grid.dx);
    const Kernel probe2 = make_kernel(cfg.kernel2, cfg.grid.dx);
    const double support = std::max(probe.support_radius(), probe2.support_radius());
    if (half <= 0.0) {
        const GrowthModel model = make_model(cfg.model);
        const auto [A1, A2] = model.a_priori_bounds(cfg.initial.amplitude1, cfg.initial.amplitude2);
        const double vbar = cfg.solver.mu1 * A1 + cfg.solver.mu2 * A2;
        half = cfg.initial.h0 + vbar * cfg.solver.t_final;
    }
    return Grid::symmetric(half + 2.0 * support, cfg.grid.dx);
}

} // namespace frontspread
