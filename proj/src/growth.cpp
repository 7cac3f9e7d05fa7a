#include "frontspread/growth.hpp"

#include "frontspread/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace frontspread {

namespace {

void require_positive(const LotkaVolterraParams &p) {
    const double vals[] = {p.a1, p.b1, p.c1, p.a2, p.b2, p.c2};
    for (double v : vals)
        if (!(v > 0.0) || !std::isfinite(v))
            fail_config("model: all Lotka-Volterra rates must be strictly positive");
}

} // namespace

GrowthModel GrowthModel::competition(const LotkaVolterraParams &p) {
    require_positive(p);
    GrowthModel m;
    m.kind_ = ModelKind::Competition;
    m.p_ = p;
    m.k_ = p.a1 / p.b1;
    m.r_ = p.a1;
    return m;
}

GrowthModel GrowthModel::predator_prey(const LotkaVolterraParams &p) {
    require_positive(p);
    GrowthModel m;
    m.kind_ = ModelKind::PredatorPrey;
    m.p_ = p;
    m.k_ = p.a1 / p.b1;
    m.r_ = p.a1;
    return m;
}

GrowthModel GrowthModel::custom(ReactFn f1, ReactFn f2, double k, double r,
                                std::function<double(double)> theta,
                                std::function<double(double, double)> lipschitz) {
    if (!f1 || !f2 || !theta || !lipschitz)
        fail_config("model: custom models need both reactions and all contract callbacks");
    if (!(k > 0.0) || !(r > 0.0))
        fail_config("model: custom k and r must be positive");
    GrowthModel m;
    m.kind_ = ModelKind::Custom;
    m.k_ = k;
    m.r_ = r;
    m.f1_ = std::move(f1);
    m.f2_ = std::move(f2);
    m.theta_ = std::move(theta);
    m.lipschitz_ = std::move(lipschitz);
    m.validate_custom();
    return m;
}

GrowthModel::Rate2 GrowthModel::react(double u1, double u2) const {
    assert(u1 >= 0.0 && u2 >= 0.0);
    switch (kind_) {
    case ModelKind::Competition:
        return {u1 * (p_.a1 - p_.b1 * u1 - p_.c1 * u2), u2 * (p_.a2 - p_.b2 * u2 - p_.c2 * u1)};
    case ModelKind::PredatorPrey:
        return {u1 * (p_.a1 - p_.b1 * u1 - p_.c1 * u2), u2 * (p_.a2 - p_.b2 * u2 + p_.c2 * u1)};
    case ModelKind::Custom:
        return {f1_(u1, u2), f2_(u1, u2)};
    }
    return {0, 0};
}

double GrowthModel::theta(double K) const {
    switch (kind_) {
    case ModelKind::Competition:
        return p_.a2 / p_.b2;
    case ModelKind::PredatorPrey:
        return (p_.a2 + p_.c2 * K) / p_.b2;
    case ModelKind::Custom:
        return theta_(K);
    }
    return 0;
}

GrowthModel::Rate2 GrowthModel::a_priori_bounds(double u10_max, double u20_max) const {
    if (u10_max < 0.0 || u20_max < 0.0)
        fail_config("model: initial maxima must be nonnegative");
    const double A1 = std::max(u10_max, k_);
    const double A2 = std::max(u20_max, theta(A1));
    return {A1, A2};
}

double GrowthModel::lipschitz_constant(double K1, double K2) const {
    if (kind_ == ModelKind::Custom)
        return lipschitz_(K1, K2);
    return std::max({p_.a1 + 2.0 * p_.b1 * K1 + p_.c1 * K2, p_.c1 * K1,
                     p_.a2 + 2.0 * p_.b2 * K2 + p_.c2 * K1, p_.c2 * K2});
}

Regime GrowthModel::regime() const {
    if (kind_ == ModelKind::Competition) {
        if (p_.b1 / p_.c2 > p_.a1 / p_.a2 && p_.a1 / p_.a2 > p_.c1 / p_.b2)
            return Regime::WeakCompetition;
        return Regime::Other;
    }
    if (kind_ == ModelKind::PredatorPrey) {
        if (p_.a1 * p_.b1 * p_.b2 > p_.a2 * p_.b1 * p_.c1 + p_.a1 * p_.c1 * p_.c2)
            return Regime::WeakPredation;
        return Regime::Other;
    }
    return Regime::Other;
}

void GrowthModel::validate_custom() const {
    // Sample the contract over a parameter box; reject on violation.
    const double A1 = std::max(1.0, 2.0 * k_);
    const double A2 = std::max(1.0, 2.0 * theta_(A1));
    const int n = 17;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double u1 = A1 * i / n;
            const double u2 = A2 * j / n;
            const auto [g1, g2] = react(u1, u2);
            if (u1 == 0.0 && std::abs(g1) > 1e-12)
                fail_config("model: custom f1 does not vanish at u1 = 0");
            if (u2 == 0.0 && std::abs(g2) > 1e-12)
                fail_config("model: custom f2 does not vanish at u2 = 0");
            if (u1 > k_ && g1 >= 0.0)
                fail_config("model: custom f1 must be negative above k");
            if (u1 > 0.0 && u1 <= k_ && g1 > r_ * u1 + 1e-12)
                fail_config("model: custom f1 exceeds r*u1 below k");
            if (u2 > theta_(A1) && g2 >= 0.0)
                fail_config("model: custom f2 must be negative above Theta");
        }
    }
}

std::string GrowthModel::kind_name() const {
    switch (kind_) {
    case ModelKind::Competition:
        return "competition";
    case ModelKind::PredatorPrey:
        return "predator_prey";
    case ModelKind::Custom:
        return "custom";
    }
    return "?";
}

} // namespace frontspread
