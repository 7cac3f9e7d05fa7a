#include "frontspread/evolver.hpp"

#include "frontspread/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace frontspread {

double contraction_dt_bound(double d_max, double lipschitz) {
    const double kappa = d_max + lipschitz;
    if (!(kappa > 0.0))
        fail_config("solver: contraction bound needs a positive rate scale");
    // phi(s) = s*kappa*exp(2*kappa*s) is increasing; bisect phi(s) = 1/2.
    double lo = 0.0, hi = 1.0 / kappa;
    while (hi * kappa * std::exp(2.0 * kappa * hi) < 0.5)
        hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid * kappa * std::exp(2.0 * kappa * mid) < 0.5)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::string abort_reason_name(AbortReason reason) {
    switch (reason) {
    case AbortReason::None:
        return "none";
    case AbortReason::PicardStall:
        return "picard_stall";
    case AbortReason::AmbientMargin:
        return "ambient_margin";
    case AbortReason::Undershoot:
        return "undershoot";
    }
    return "?";
}

Simulator::Simulator(Grid grid, GrowthModel model, Kernel kernel1, Kernel kernel2,
                     SolverConfig cfg)
    : grid_(grid), model_(std::move(model)), kernel1_(std::move(kernel1)),
      kernel2_(std::move(kernel2)), cfg_(cfg), conv1_(grid_, kernel1_, cfg.conv_path),
      conv2_(grid_, kernel2_, cfg.conv_path) {
    if (!(cfg_.d1 > 0.0) || !(cfg_.d2 > 0.0))
        fail_config("solver: dispersal rates must be positive");
    if (!(cfg_.mu1 > 0.0) || !(cfg_.mu2 > 0.0))
        fail_config("solver: boundary coefficients must be positive");
    if (!(cfg_.t_final > 0.0))
        fail_config("solver: t_final must be positive");
    if (cfg_.picard_max_iters < 2)
        fail_config("solver: picard_max_iters must be at least 2");
    margin_ = std::max(kernel1_.support_radius(), kernel2_.support_radius());
    const std::size_t n = static_cast<std::size_t>(grid_.n);
    v1_.resize(n);
    v2_.resize(n);
    w1_.resize(n);
    w2_.resize(n);
    c1_.resize(n);
    c2_.resize(n);
}

FieldState Simulator::initialize(double h0, const std::function<double(double)> &u10,
                                 const std::function<double(double)> &u20) const {
    if (!(h0 > 0.0))
        fail_config("initial: h0 must be positive");
    if (h0 + margin_ >= 0.5 * (grid_.x_max() - grid_.x_min))
        fail_config("initial: ambient grid too small for h0 plus one kernel support");

    const double endpoint_tol = 1e-9;
    const std::function<double(double)> *profiles[2] = {&u10, &u20};
    for (int s = 0; s < 2; ++s) {
        const auto &f = *profiles[s];
        if (std::abs(f(-h0)) > endpoint_tol || std::abs(f(h0)) > endpoint_tol) {
            std::ostringstream os;
            os << "initial: profile " << (s + 1) << " must vanish at the initial boundaries";
            fail_config(os.str());
        }
    }

    FieldState state;
    state.t = 0.0;
    state.g = -h0;
    state.h = h0;
    state.u1.assign(static_cast<std::size_t>(grid_.n), 0.0);
    state.u2.assign(static_cast<std::size_t>(grid_.n), 0.0);
    const int i0 = grid_.first_inside(-h0);
    const int i1 = grid_.last_inside(h0);
    bool positive1 = true, positive2 = true;
    for (int i = i0; i <= i1; ++i) {
        const double x = grid_.x(i);
        const double v1 = u10(x);
        const double v2 = u20(x);
        positive1 = positive1 && v1 > 0.0;
        positive2 = positive2 && v2 > 0.0;
        state.u1[static_cast<std::size_t>(i)] = v1;
        state.u2[static_cast<std::size_t>(i)] = v2;
    }
    if (i0 > i1)
        fail_config("initial: no grid nodes inside (-h0, h0); refine dx");
    if (!positive1 || !positive2)
        fail_config("initial: profiles must be strictly positive inside (-h0, h0)");
    return state;
}

void Simulator::prepare(const FieldState &state) {
    const double m1 = state.u1.empty() ? 0.0 : *std::max_element(state.u1.begin(), state.u1.end());
    const double m2 = state.u2.empty() ? 0.0 : *std::max_element(state.u2.begin(), state.u2.end());
    const auto [a1, a2] = model_.a_priori_bounds(m1, m2);
    a1_ = a1;
    a2_ = a2;
    lipschitz_ = model_.lipschitz_constant(a1_, a2_);
    const double bound = contraction_dt_bound(std::max(cfg_.d1, cfg_.d2), lipschitz_);
    if (cfg_.dt > 0.0) {
        const double kappa = std::max(cfg_.d1, cfg_.d2) + lipschitz_;
        if (cfg_.dt * kappa * std::exp(2.0 * kappa * cfg_.dt) > 0.5) {
            std::ostringstream os;
            os << "solver: dt = " << cfg_.dt << " violates the contraction bound dt <= " << bound
               << " (dt * k * exp(2 k dt) <= 1/2 with k = d_max + L = " << kappa << ")";
            fail_config(os.str());
        }
        dt_ = cfg_.dt;
    } else {
        dt_ = 0.9 * bound;
    }
    prepared_ = true;
    pending_abort_.reset();
}

FluxPair Simulator::total_flux(const FieldState &state) const {
    const FluxPair f1 = boundary_flux(grid_, kernel1_, state.g, state.h, state.u1);
    const FluxPair f2 = boundary_flux(grid_, kernel2_, state.g, state.h, state.u2);
    return {cfg_.mu1 * f1.left + cfg_.mu2 * f2.left, cfg_.mu1 * f1.right + cfg_.mu2 * f2.right};
}

StepInfo Simulator::step(FieldState &state) {
    if (!prepared_)
        prepare(state);
    StepInfo info;

    const int i0 = grid_.first_inside(state.g);
    const int i1 = grid_.last_inside(state.h);
    const double dt = dt_;

    // Densities at frozen boundaries: fixed-point iteration of
    //   v <- u + dt * (d (J*v - v) + f(v))
    // with the convolution re-evaluated at each inner iterate.
    v1_ = state.u1;
    v2_ = state.u2;
    std::fill(w1_.begin(), w1_.end(), 0.0);
    std::fill(w2_.begin(), w2_.end(), 0.0);

    double prev_diff = std::numeric_limits<double>::infinity();
    const double ratio_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                               std::max({1.0, a1_, a2_});
    bool converged = false;
    for (int m = 0; m < cfg_.picard_max_iters; ++m) {
        conv1_.apply(v1_, c1_);
        conv2_.apply(v2_, c2_);
        double diff = 0.0;
        for (int i = i0; i <= i1; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            const auto [f1, f2] = model_.react(std::max(v1_[k], 0.0), std::max(v2_[k], 0.0));
            const double n1 = state.u1[k] + dt * (cfg_.d1 * (c1_[k] - v1_[k]) + f1);
            const double n2 = state.u2[k] + dt * (cfg_.d2 * (c2_[k] - v2_[k]) + f2);
            diff = std::max(diff, std::abs(n1 - v1_[k]));
            diff = std::max(diff, std::abs(n2 - v2_[k]));
            w1_[k] = n1;
            w2_[k] = n2;
        }
        std::swap(v1_, w1_);
        std::swap(v2_, w2_);
        info.picard_iters = m + 1;
        if (m >= 1 && prev_diff > ratio_floor)
            info.picard_ratio = std::max(info.picard_ratio, diff / prev_diff);
        if (diff < cfg_.picard_tol) {
            converged = true;
            break;
        }
        prev_diff = diff;
    }
    if (!converged) {
        pending_abort_ = {AbortReason::PicardStall,
                          "inner iteration did not contract below picard_tol within "
                          "picard_max_iters; reduce dt"};
        return info;
    }

    // Positivity policy: clip rounding-level undershoot, abort on anything
    // larger (that indicates a scheme bug, not dynamics).
    double undershoot = 0.0;
    for (int i = i0; i <= i1; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        undershoot = std::min({undershoot, v1_[k], v2_[k]});
        if (v1_[k] < 0.0)
            v1_[k] = 0.0;
        if (v2_[k] < 0.0)
            v2_[k] = 0.0;
    }
    info.undershoot = undershoot;
    if (undershoot < -cfg_.undershoot_limit) {
        std::ostringstream os;
        os << "density undershoot " << undershoot << " exceeds the limit " << cfg_.undershoot_limit;
        pending_abort_ = {AbortReason::Undershoot, os.str()};
        return info;
    }

    // Boundaries from the outward flux of the updated densities.
    const FluxPair f1 = boundary_flux(grid_, kernel1_, state.g, state.h, v1_);
    const FluxPair f2 = boundary_flux(grid_, kernel2_, state.g, state.h, v2_);
    info.hp = cfg_.mu1 * f1.right + cfg_.mu2 * f2.right;
    info.gp = -(cfg_.mu1 * f1.left + cfg_.mu2 * f2.left);

    const double new_g = state.g + dt * info.gp;
    const double new_h = state.h + dt * info.hp;
    if (new_h > grid_.x_max() - margin_ || new_g < grid_.x_min + margin_) {
        std::ostringstream os;
        os << "moving boundary reached within one kernel support of the ambient edge at t = "
           << state.t + dt << "; enlarge grid.half_width";
        pending_abort_ = {AbortReason::AmbientMargin, os.str()};
        return info;
    }

    // Zero extension: nodes swept into the domain this step stay 0 until the
    // convolution feeds them at the next step.
    state.u1.swap(v1_);
    state.u2.swap(v2_);
    state.g = new_g;
    state.h = new_h;
    state.t += dt;
    return info;
}

Trajectory Simulator::run(FieldState state) {
    prepare(state);
    Trajectory traj;
    traj.grid = grid_;
    traj.bound_a1 = a1_;
    traj.bound_a2 = a2_;
    traj.lipschitz = lipschitz_;
    traj.dt = dt_;

    const auto record = [&](const FieldState &s, double gp, double hp) {
        TrajectoryRow row;
        row.t = s.t;
        row.g = s.g;
        row.h = s.h;
        row.gp = gp;
        row.hp = hp;
        row.mass1 = domain_integral(grid_, s.g, s.h, s.u1);
        row.mass2 = domain_integral(grid_, s.g, s.h, s.u2);
        row.max1 = *std::max_element(s.u1.begin(), s.u1.end());
        row.max2 = *std::max_element(s.u2.begin(), s.u2.end());
        traj.peak_u1 = std::max(traj.peak_u1, row.max1);
        traj.peak_u2 = std::max(traj.peak_u2, row.max2);
        traj.rows.push_back(row);
    };
    const auto snapshot = [&](const FieldState &s) {
        FieldSnapshot snap;
        snap.t = s.t;
        snap.g = s.g;
        snap.h = s.h;
        snap.u1 = s.u1;
        snap.u2 = s.u2;
        traj.snapshots.push_back(std::move(snap));
    };

    {
        const FluxPair f0 = total_flux(state);
        record(state, -f0.left, f0.right);
        if (cfg_.snapshot_every > 0)
            snapshot(state);
    }

    const long nsteps = static_cast<long>(std::ceil(cfg_.t_final / dt_ - 1e-9));
    for (long k = 1; k <= nsteps; ++k) {
        const StepInfo info = step(state);
        if (pending_abort_) {
            traj.abort = pending_abort_->first;
            traj.abort_detail = pending_abort_->second;
            break;
        }
        record(state, info.gp, info.hp);
        traj.picard_ratios.push_back(info.picard_ratio);
        traj.picard_iters.push_back(info.picard_iters);
        traj.undershoot = std::min(traj.undershoot, info.undershoot);
        if (cfg_.snapshot_every > 0 && (k % cfg_.snapshot_every == 0 || k == nsteps))
            snapshot(state);
    }
    return traj;
}

double ComparisonReport::max_violation() const {
    return std::max({viol_u1, viol_u2, viol_g, viol_h});
}

ComparisonReport compare_runs(const Trajectory &lower, const Trajectory &upper) {
    if (!(lower.grid == upper.grid))
        throw Error(ErrorCode::Config, "compare_runs: trajectories use different grids");
    ComparisonReport report;
    const std::size_t rows = std::min(lower.rows.size(), upper.rows.size());
    for (std::size_t k = 0; k < rows; ++k) {
        const auto &lo = lower.rows[k];
        const auto &up = upper.rows[k];
        if (std::abs(lo.t - up.t) > 1e-9)
            throw Error(ErrorCode::Config, "compare_runs: trajectories sample different times");
        report.viol_g = std::max(report.viol_g, up.g - lo.g);
        report.viol_h = std::max(report.viol_h, lo.h - up.h);
    }
    const std::size_t snaps = std::min(lower.snapshots.size(), upper.snapshots.size());
    for (std::size_t k = 0; k < snaps; ++k) {
        const auto &lo = lower.snapshots[k];
        const auto &up = upper.snapshots[k];
        if (std::abs(lo.t - up.t) > 1e-9)
            throw Error(ErrorCode::Config, "compare_runs: snapshots sample different times");
        for (std::size_t i = 0; i < lo.u1.size(); ++i) {
            report.viol_u1 = std::max(report.viol_u1, lo.u1[i] - up.u1[i]);
            report.viol_u2 = std::max(report.viol_u2, lo.u2[i] - up.u2[i]);
        }
    }
    return report;
}

} // namespace frontspread
