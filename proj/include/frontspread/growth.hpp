#pragma once

#include <functional>
#include <string>
#include <utility>

namespace frontspread {

enum class ModelKind { Competition, PredatorPrey, Custom };
enum class Regime { WeakCompetition, WeakPredation, Other };

struct LotkaVolterraParams {
    double a1 = 1, b1 = 1, c1 = 0.5;
    double a2 = 1, b2 = 1, c2 = 0.5;
};

/// The reaction pair (f1, f2) together with the derived a-priori machinery:
/// the cap k above which f1 turns negative, the linear growth bound r, the
/// saturation level Theta(K) for the second species, and a Lipschitz bound
/// over density boxes. Immutable; freely shareable.
class GrowthModel {
  public:
    using Rate2 = std::pair<double, double>;
    using ReactFn = std::function<double(double, double)>;

    static GrowthModel competition(const LotkaVolterraParams &p);
    static GrowthModel predator_prey(const LotkaVolterraParams &p);
    /// User-supplied reactions plus their contract constants. The constructor
    /// samples the contract and rejects models that violate it.
    static GrowthModel custom(ReactFn f1, ReactFn f2, double k, double r,
                              std::function<double(double)> theta,
                              std::function<double(double, double)> lipschitz);

    /// (f1, f2) evaluated pointwise at nonnegative densities.
    Rate2 react(double u1, double u2) const;

    /// A1 = max(u10_max, k), A2 = max(u20_max, Theta(A1)).
    Rate2 a_priori_bounds(double u10_max, double u20_max) const;

    /// Upper bound on every |df_i/du_j| over [0,K1] x [0,K2].
    double lipschitz_constant(double K1, double K2) const;

    Regime regime() const;

    double carrying_k() const { return k_; }
    double growth_r() const { return r_; }
    double theta(double K) const;

    ModelKind kind() const { return kind_; }
    const LotkaVolterraParams &params() const { return p_; }
    std::string kind_name() const;

  private:
    GrowthModel() = default;
    void validate_custom() const;

    ModelKind kind_ = ModelKind::Competition;
    LotkaVolterraParams p_;
    double k_ = 1, r_ = 1;
    ReactFn f1_, f2_;
    std::function<double(double)> theta_;
    std::function<double(double, double)> lipschitz_;
};

} // namespace frontspread
