#include "frontspread/analysis.hpp"

#include "frontspread/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace frontspread {

std::string verdict_name(Verdict verdict) {
    switch (verdict) {
    case Verdict::Spreading:
        return "spreading";
    case Verdict::Vanishing:
        return "vanishing";
    case Verdict::Undetermined:
        return "undetermined";
    }
    return "?";
}

Classification classify(const Trajectory &trajectory, std::optional<double> ell_star,
                        const ClassifyTols &tols, bool compact_support_kernels) {
    if (!trajectory.completed())
        fail_config("classify: trajectory aborted (" + trajectory.abort_detail + ")");
    if (trajectory.rows.size() < 8)
        fail_config("classify: trajectory too short to form a decision window");

    const double t0 = trajectory.t_begin();
    const double t1 = trajectory.t_end();
    const double window_start = t1 - tols.window_frac * (t1 - t0);

    Classification c;
    c.ell_star = ell_star;
    c.compact_support_warning = compact_support_kernels;
    c.window_speed_min = std::numeric_limits<double>::infinity();
    for (const auto &row : trajectory.rows) {
        if (row.t < window_start)
            continue;
        c.final_max1 = std::max(c.final_max1, row.max1);
        c.final_max2 = std::max(c.final_max2, row.max2);
        const double outward = std::min(row.hp, -row.gp);
        const double fastest = std::max(row.hp, -row.gp);
        c.window_speed_min = std::min(c.window_speed_min, outward);
        c.window_speed_max = std::max(c.window_speed_max, fastest);
    }
    const auto &last = trajectory.rows.back();
    c.final_range = last.h - last.g;

    const bool range_clause = !ell_star || c.final_range > *ell_star;
    if (range_clause && c.window_speed_min > tols.speed_tol) {
        c.verdict = Verdict::Spreading;
        return c;
    }
    if (ell_star && c.final_max1 < tols.vanish_tol && c.final_max2 < tols.vanish_tol &&
        c.window_speed_max < tols.speed_tol &&
        c.final_range <= *ell_star * (1.0 + tols.range_frac)) {
        c.verdict = Verdict::Vanishing;
        return c;
    }
    c.verdict = Verdict::Undetermined;
    c.note = "neither rule set satisfied; extend t_final";
    if (compact_support_kernels)
        c.note += " (kernels lack full-line positivity; the dichotomy is only guaranteed for "
                  "everywhere-positive kernels)";
    return c;
}

CriteriaResult criteria_check(const GrowthModel &model, double d1, double d2, double h0,
                              std::optional<double> ell_star) {
    if (model.kind() == ModelKind::Custom)
        fail_unsupported("criteria_check: only the Lotka-Volterra kinds are supported");
    const auto &p = model.params();
    CriteriaResult r;
    r.ell_star = ell_star;
    if (p.a1 >= d1 || p.a2 >= d2) {
        r.prediction = Prediction::MustSpread;
        std::ostringstream os;
        os << "reaction rate dominates dispersal (a1 >= d1 or a2 >= d2); the eigenvalue is "
              "positive on every large interval";
        r.reason = os.str();
        r.ell_star.reset();
        return r;
    }
    if (!ell_star)
        fail_config("criteria_check: ell_star is required when a_i < d_i for both species");
    if (h0 >= 0.5 * *ell_star) {
        r.prediction = Prediction::MustSpread;
        std::ostringstream os;
        os << "initial half-range " << h0 << " >= ell_star/2 = " << 0.5 * *ell_star;
        r.reason = os.str();
        return r;
    }
    r.prediction = Prediction::DependsOnMu;
    std::ostringstream os;
    os << "initial half-range " << h0 << " < ell_star/2 = " << 0.5 * *ell_star
       << "; outcome depends on mu1 + mu2";
    r.reason = os.str();
    return r;
}

MuBracket mu_threshold(const std::function<MuRun(double mu_total)> &launch, double mu_lo,
                       double mu_hi, int budget, double target_ratio, int parallelism) {
    if (!(mu_lo > 0.0) || !(mu_hi > mu_lo))
        fail_config("mu_threshold: need 0 < mu_lo < mu_hi");
    if (!(target_ratio > 1.0))
        fail_config("mu_threshold: target_ratio must exceed 1");

    MuBracket bracket;
    MuRun run_lo, run_hi;
    if (parallelism >= 2) {
        auto fut = std::async(std::launch::async, launch, mu_hi);
        run_lo = launch(mu_lo);
        run_hi = fut.get();
    } else {
        run_lo = launch(mu_lo);
        run_hi = launch(mu_hi);
    }
    bracket.runs.push_back(run_lo);
    bracket.runs.push_back(run_hi);
    if (run_lo.verdict != Verdict::Vanishing)
        throw Error(ErrorCode::Undetermined,
                    "mu_threshold: the lower endpoint did not vanish; lower mu_lo or extend "
                    "t_final");
    if (run_hi.verdict != Verdict::Spreading)
        throw Error(ErrorCode::Undetermined,
                    "mu_threshold: the upper endpoint did not spread; raise mu_hi or extend "
                    "t_final");

    double lo = mu_lo, hi = mu_hi;
    for (int it = 0; it < budget && hi / lo > target_ratio; ++it) {
        const double mid = std::sqrt(lo * hi);
        const MuRun r = launch(mid);
        bracket.runs.push_back(r);
        if (r.verdict == Verdict::Vanishing) {
            lo = mid;
        } else if (r.verdict == Verdict::Spreading) {
            hi = mid;
        } else {
            throw Error(ErrorCode::Undetermined,
                        "mu_threshold: undetermined outcome at mu = " + std::to_string(mid) +
                            " after retries; extend t_final");
        }
    }
    bracket.mu_lo = lo;
    bracket.mu_hi = hi;

    double max_vanish = 0.0, min_spread = std::numeric_limits<double>::infinity();
    for (const auto &r : bracket.runs) {
        if (r.verdict == Verdict::Vanishing)
            max_vanish = std::max(max_vanish, r.mu_total);
        if (r.verdict == Verdict::Spreading)
            min_spread = std::min(min_spread, r.mu_total);
    }
    bracket.monotone_consistent = max_vanish < min_spread;
    return bracket;
}

std::pair<double, double> coexistence_limit(const GrowthModel &model) {
    const auto &p = model.params();
    switch (model.regime()) {
    case Regime::WeakCompetition: {
        const double den = p.b1 * p.b2 - p.c1 * p.c2;
        return {(p.a1 * p.b2 - p.a2 * p.c1) / den, (p.a2 * p.b1 - p.a1 * p.c2) / den};
    }
    case Regime::WeakPredation: {
        const double den = p.b1 * p.b2 + p.c1 * p.c2;
        return {(p.a1 * p.b2 - p.a2 * p.c1) / den, (p.a1 * p.c2 + p.a2 * p.b1) / den};
    }
    case Regime::Other:
        break;
    }
    fail_unsupported("coexistence_limit: model is outside the weak regimes");
}

IterationSequences iterate_bounds(const GrowthModel &model, int n_iters) {
    if (n_iters < 1)
        fail_config("iterate_bounds: n_iters must be at least 1");
    const Regime regime = model.regime();
    if (regime == Regime::Other)
        fail_unsupported("iterate_bounds: model is outside the weak regimes");
    const auto &p = model.params();

    IterationSequences seq;
    seq.regime = regime;
    seq.q = (p.c1 * p.c2) / (p.b1 * p.b2);
    if (regime == Regime::WeakCompetition) {
        seq.p = p.a1 / p.b1 - (p.a2 * p.c1) / (p.b1 * p.b2);
        double a_up = p.a1 / p.b1;
        for (int i = 0; i < n_iters; ++i) {
            seq.a_upper.push_back(a_up);
            seq.b_lower.push_back((p.a2 - p.c2 * a_up) / p.b2);
            a_up = (p.a1 - p.c1 * seq.b_lower.back()) / p.b1;
        }
    } else {
        seq.a = (p.a2 * p.b1 + p.a1 * p.c2) / (p.b1 * p.b2);
        double a_up = p.a1 / p.b1;
        for (int i = 0; i < n_iters; ++i) {
            seq.a_upper.push_back(a_up);
            seq.b_upper.push_back((p.a2 + p.c2 * a_up) / p.b2);
            seq.a_lower.push_back((p.a1 - p.c1 * seq.b_upper.back()) / p.b1);
            seq.b_lower.push_back((p.a2 + p.c2 * seq.a_lower.back()) / p.b2);
            a_up = (p.a1 - p.c1 * seq.b_lower.back()) / p.b1;
        }
    }
    return seq;
}

LimitReport verify_limit(const Trajectory &trajectory, const Classification &classification,
                         const GrowthModel &model, double window_frac,
                         const std::vector<double> &probe_points) {
    if (classification.verdict != Verdict::Spreading)
        fail_unsupported("verify_limit: the run is not classified as spreading");
    if (trajectory.snapshots.empty())
        fail_config("verify_limit: the trajectory carries no snapshots");

    LimitReport report;
    report.target = coexistence_limit(model);
    const double t1 = trajectory.snapshots.back().t;
    const double t0 = trajectory.snapshots.front().t;
    const double window_start = t1 - window_frac * (t1 - t0);

    std::size_t first = trajectory.snapshots.size();
    for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
        if (trajectory.snapshots[k].t >= window_start - 1e-12) {
            first = k;
            break;
        }
    }
    if (first >= trajectory.snapshots.size())
        fail_config("verify_limit: no snapshots inside the window");
    const auto &start = trajectory.snapshots[first];

    const Grid &grid = trajectory.grid;
    for (double x : probe_points) {
        if (!(x > start.g && x < start.h)) {
            std::ostringstream os;
            os << "verify_limit: probe x = " << x << " lies outside the populated range ["
               << start.g << ", " << start.h << "] at the window start";
            fail_config(os.str());
        }
        LimitProbe probe;
        probe.x = x;
        double sum1 = 0, sum2 = 0;
        std::size_t count = 0;
        for (std::size_t k = first; k < trajectory.snapshots.size(); ++k) {
            const auto &snap = trajectory.snapshots[k];
            const double u1 = grid.interp(snap.u1, x);
            const double u2 = grid.interp(snap.u2, x);
            probe.err1 = std::max(probe.err1, std::abs(u1 - report.target.first));
            probe.err2 = std::max(probe.err2, std::abs(u2 - report.target.second));
            sum1 += std::abs(u1 - report.target.first);
            sum2 += std::abs(u2 - report.target.second);
            ++count;
        }
        report.max_err1 = std::max(report.max_err1, probe.err1);
        report.max_err2 = std::max(report.max_err2, probe.err2);
        report.mean_err1 = std::max(report.mean_err1, sum1 / count);
        report.mean_err2 = std::max(report.mean_err2, sum2 / count);
        report.probes.push_back(probe);
    }
    return report;
}

} // namespace frontspread
