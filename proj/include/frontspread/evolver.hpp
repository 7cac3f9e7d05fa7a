#pragma once

#include "frontspread/field.hpp"
#include "frontspread/growth.hpp"
#include "frontspread/kernel.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace frontspread {

struct SolverConfig {
    double d1 = 1.0, d2 = 1.0;   // dispersal rates
    double mu1 = 1.0, mu2 = 1.0; // boundary response coefficients
    double dt = 0.0;             // 0 = auto: 0.9 x the contraction bound
    double picard_tol = 1e-12;   // sup-norm successive-difference tolerance
    int picard_max_iters = 400;
    double t_final = 10.0;
    int snapshot_every = 0; // steps between field snapshots; 0 = none
    ConvPath conv_path = ConvPath::Auto;
    double undershoot_limit = 1e-12;
};

/// Largest s with s * kappa * exp(2 * kappa * s) <= 1/2,
/// kappa = max(d1, d2) + L(A1, A2). Step sizes at or below this keep the
/// per-step fixed-point update a contraction with ratio <= 1/2.
double contraction_dt_bound(double d_max, double lipschitz);

struct FieldState {
    double t = 0.0;
    double g = 0.0, h = 0.0;
    std::vector<double> u1, u2;
};

struct TrajectoryRow {
    double t = 0, g = 0, h = 0, gp = 0, hp = 0;
    double mass1 = 0, mass2 = 0, max1 = 0, max2 = 0;
};

struct FieldSnapshot {
    double t = 0, g = 0, h = 0;
    std::vector<double> u1, u2;
};

enum class AbortReason { None, PicardStall, AmbientMargin, Undershoot };

std::string abort_reason_name(AbortReason reason);

struct Trajectory {
    Grid grid;
    std::vector<TrajectoryRow> rows;
    std::vector<FieldSnapshot> snapshots;
    std::vector<double> picard_ratios; // per step, largest successive-difference ratio
    std::vector<int> picard_iters;
    AbortReason abort = AbortReason::None;
    std::string abort_detail;
    double bound_a1 = 0, bound_a2 = 0; // a-priori density caps in force
    double lipschitz = 0;
    double dt = 0;
    double peak_u1 = 0, peak_u2 = 0; // largest density seen anywhere in the run
    double undershoot = 0;           // most negative pre-clip value seen

    bool completed() const { return abort == AbortReason::None; }
    double t_begin() const { return rows.empty() ? 0.0 : rows.front().t; }
    double t_end() const { return rows.empty() ? 0.0 : rows.back().t; }
};

struct StepInfo {
    int picard_iters = 0;
    double picard_ratio = 0.0; // largest successive-difference ratio observed
    double gp = 0.0, hp = 0.0;
    double undershoot = 0.0;
};

/// Advances the coupled system: densities by a per-step fixed-point iteration
/// at frozen boundaries, then the boundaries by the outward flux of the
/// updated densities. One Simulator drives one run at a time; distinct
/// Simulators never share mutable state.
class Simulator {
  public:
    Simulator(Grid grid, GrowthModel model, Kernel kernel1, Kernel kernel2, SolverConfig cfg);

    /// Builds the t = 0 state from continuous initial profiles on [-h0, h0].
    /// Rejects profiles that are nonzero at the endpoints or not strictly
    /// positive inside.
    FieldState initialize(double h0, const std::function<double(double)> &u10,
                          const std::function<double(double)> &u20) const;

    /// Derives the density caps, the Lipschitz constant and the step size
    /// from the given state. Called by run(); call it before stepping
    /// manually. Throws when a user-specified dt violates the contraction
    /// bound.
    void prepare(const FieldState &state);

    StepInfo step(FieldState &state);

    /// Steps until t_final, recording diagnostics every step and snapshots on
    /// the configured cadence. On abort the trajectory collected so far is
    /// returned with the reason attached.
    Trajectory run(FieldState state);

    double dt() const { return dt_; }
    double bound_a1() const { return a1_; }
    double bound_a2() const { return a2_; }
    double lipschitz() const { return lipschitz_; }
    const Grid &grid() const { return grid_; }
    const GrowthModel &model() const { return model_; }
    const SolverConfig &config() const { return cfg_; }

  private:
    FluxPair total_flux(const FieldState &state) const;

    Grid grid_;
    GrowthModel model_;
    Kernel kernel1_, kernel2_;
    SolverConfig cfg_;
    mutable Convolver conv1_, conv2_;
    double margin_ = 0.0; // ambient-edge safety distance (one kernel support)
    bool prepared_ = false;
    double a1_ = 0, a2_ = 0, lipschitz_ = 0, dt_ = 0;
    std::vector<double> v1_, v2_, w1_, w2_, c1_, c2_; // step workspaces
    std::optional<std::pair<AbortReason, std::string>> pending_abort_;
};

struct ComparisonReport {
    double viol_u1 = 0, viol_u2 = 0; // max of (lower - upper) over common snapshots
    double viol_g = 0;               // max of (upper_g - lower_g)
    double viol_h = 0;               // max of (lower_h - upper_h)
    double max_violation() const;
};

/// Largest ordering violations between a run and a dominating run across all
/// common times and nodes. Both trajectories must share the grid and the
/// recorded time points.
ComparisonReport compare_runs(const Trajectory &lower, const Trajectory &upper);

} // namespace frontspread
