#pragma once

#include "frontspread/evolver.hpp"
#include "frontspread/growth.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace frontspread {

enum class Verdict { Spreading, Vanishing, Undetermined };

std::string verdict_name(Verdict verdict);

struct ClassifyTols {
    double vanish_tol = 1e-3;  // density maxima below this count as gone
    double speed_tol = 1e-4;   // boundary speeds below this count as stalled
    double range_frac = 0.05;  // vanishing range slack, relative to ell_star
    double window_frac = 0.10; // fraction of the run forming the decision window
};

struct Classification {
    Verdict verdict = Verdict::Undetermined;
    double final_range = 0;
    double final_max1 = 0, final_max2 = 0; // largest density maxima over the window
    double window_speed_max = 0;           // largest boundary speed over the window
    double window_speed_min = 0;           // smallest boundary speed over the window
    std::optional<double> ell_star;
    bool compact_support_warning = false; // kernels without full-line positivity
    std::string note;
};

/// Applies the finite-time dichotomy rules over the final decision window.
/// Undetermined is a valid outcome and suggests extending t_final.
Classification classify(const Trajectory &trajectory, std::optional<double> ell_star,
                        const ClassifyTols &tols = {}, bool compact_support_kernels = false);

enum class Prediction { MustSpread, DependsOnMu };

struct CriteriaResult {
    Prediction prediction = Prediction::DependsOnMu;
    std::optional<double> ell_star;
    std::string reason;
};

/// The a-priori spreading criteria: spreading is forced when a dispersal rate
/// is dominated by its reaction rate or when the initial range already covers
/// half the critical length; otherwise the outcome depends on mu.
CriteriaResult criteria_check(const GrowthModel &model, double d1, double d2, double h0,
                              std::optional<double> ell_star);

struct MuRun {
    double mu_total = 0;
    Verdict verdict = Verdict::Undetermined;
    double final_range = 0;
    double t_final = 0;
};

struct MuBracket {
    double mu_lo = 0; // largest mu observed to vanish
    double mu_hi = 0; // smallest mu observed to spread
    std::vector<MuRun> runs;
    bool monotone_consistent = true;
};

/// Geometric bisection of the total boundary coefficient between a vanishing
/// and a spreading outcome. The launcher runs one simulation at the given
/// total mu (split evenly across species) and classifies it. Stops when the
/// bracket ratio reaches target_ratio or the bisection budget is spent.
MuBracket mu_threshold(const std::function<MuRun(double mu_total)> &launch, double mu_lo,
                       double mu_hi, int budget, double target_ratio = 2.0, int parallelism = 1);

/// Coexistence state approached by spreading solutions in the weak regimes.
std::pair<double, double> coexistence_limit(const GrowthModel &model);

struct IterationSequences {
    Regime regime = Regime::Other;
    std::vector<double> a_upper; // upper bounds for species 1
    std::vector<double> a_lower; // lower bounds for species 1 (predation only)
    std::vector<double> b_upper; // upper bounds for species 2 (predation only)
    std::vector<double> b_lower; // lower bounds for species 2
    double p = 0, q = 0, a = 0;  // recurrence constants
};

/// The squeeze sequences whose fixed points are the coexistence limits:
/// competition uses the pair (A_i upper, B_i lower); predation interleaves
/// four sequences. Generated exactly by the recurrences.
IterationSequences iterate_bounds(const GrowthModel &model, int n_iters);

struct LimitProbe {
    double x = 0;
    double err1 = 0, err2 = 0; // max |u_i - u_i*| over the window
};

struct LimitReport {
    std::vector<LimitProbe> probes;
    double max_err1 = 0, max_err2 = 0;
    double mean_err1 = 0, mean_err2 = 0; // averaged over the window at each probe, then maxed
    std::pair<double, double> target;
};

/// Measures how close the spreading solution is to the coexistence limit at
/// the probe points over the final window. Refuses non-spreading runs and
/// probes outside the populated range.
LimitReport verify_limit(const Trajectory &trajectory, const Classification &classification,
                         const GrowthModel &model, double window_frac,
                         const std::vector<double> &probe_points);

} // namespace frontspread
