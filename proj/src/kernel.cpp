#include "frontspread/kernel.hpp"

#include "frontspread/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frontspread {

namespace {

constexpr double kPi = 3.14159265358979323846;

double trapezoid_mass(const std::vector<double> &v, double spacing) {
    if (v.size() < 2)
        return 0.0;
    double sum = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        sum += v[i];
    return sum * spacing;
}

} // namespace

void ValidationReport::add(const std::string &name, bool pass, double measured,
                           const std::string &detail) {
    checks.push_back({name, pass, measured, detail});
    passed = passed && pass;
}

Kernel Kernel::triangular(double sigma, double spacing) {
    if (sigma <= 0.0)
        fail_config("kernel: triangular sigma must be positive");
    if (spacing <= 0.0 || spacing > sigma)
        fail_config("kernel: spacing must lie in (0, sigma]");
    Kernel k;
    k.family_ = KernelFamily::Triangular;
    k.sigma_ = sigma;
    k.radius_ = sigma;
    k.spacing_ = spacing;
    k.norm_ = 1.0 / sigma;
    k.sup_ = 1.0 / sigma;
    k.strictly_positive_ = false;
    k.build_tables();
    k.check_or_throw({});
    return k;
}

Kernel Kernel::gaussian(double sigma, double cutoff, double spacing) {
    if (sigma <= 0.0)
        fail_config("kernel: gaussian sigma must be positive");
    if (cutoff <= 0.0)
        fail_config("kernel: gaussian cutoff must be positive");
    if (spacing <= 0.0 || spacing > cutoff)
        fail_config("kernel: spacing must lie in (0, cutoff]");
    Kernel k;
    k.family_ = KernelFamily::Gaussian;
    k.sigma_ = sigma;
    k.radius_ = cutoff;
    k.spacing_ = spacing;
    const double captured = std::erf(cutoff / (sigma * std::sqrt(2.0)));
    k.norm_ = 1.0 / (sigma * std::sqrt(2.0 * kPi) * captured);
    k.sup_ = k.norm_;
    k.strictly_positive_ = true; // positive on the whole line before truncation
    k.mass_correction_ = 1.0 - captured;
    k.build_tables();
    k.check_or_throw({});
    return k;
}

Kernel Kernel::tabulated(const std::vector<double> &x, const std::vector<double> &j,
                         const KernelTolerances &tol) {
    if (x.size() != j.size() || x.size() < 3)
        fail_config("kernel: tabulated data needs matching x/J columns with at least 3 rows");
    const std::size_t n = x.size();
    if (n % 2 == 0)
        fail_config("kernel: tabulated grid must be symmetric around 0 (odd point count)");
    const double spacing = x[1] - x[0];
    if (spacing <= 0.0)
        fail_config("kernel: tabulated x column must be strictly increasing");
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((x[i] - x[i - 1]) - spacing) > 1e-9 * std::max(1.0, spacing))
            fail_config("kernel: tabulated x column must be uniformly spaced");
    }
    const int half = static_cast<int>(n / 2);
    if (std::abs(x[half]) > 1e-9 * spacing)
        fail_config("kernel: tabulated grid must contain x = 0 at its center");

    Kernel k;
    k.family_ = KernelFamily::Tabulated;
    k.spacing_ = spacing;
    k.radius_ = x.back();
    k.half_ = half;
    k.strictly_positive_ = false;

    // Symmetrize; reject profiles that are not even to rounding accuracy.
    std::vector<double> v(n);
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sup = std::max(sup, std::abs(j[i]));
    for (int kk = 0; kk <= half; ++kk) {
        const double a = j[half + kk];
        const double b = j[half - kk];
        if (std::abs(a - b) > 1e-10 * std::max(1.0, sup))
            fail_config("kernel: tabulated profile is not even");
        v[half + kk] = v[half - kk] = 0.5 * (a + b);
    }
    for (double s : v)
        if (s < 0.0)
            fail_config("kernel: tabulated profile has negative samples");
    if (v[half] <= 0.0)
        fail_config("kernel: tabulated profile vanishes at the origin");

    const double mass = trapezoid_mass(v, spacing);
    if (std::abs(mass - 1.0) > tol.renorm_limit) {
        std::ostringstream os;
        os << "kernel: tabulated mass " << mass << " deviates from 1 by more than "
           << tol.renorm_limit << " and cannot be renormalized";
        fail_config(os.str());
    }
    for (double &s : v)
        s /= mass;
    k.mass_correction_ = std::abs(mass - 1.0);
    k.tab_values_ = v;
    k.sigma_ = k.radius_;
    k.sup_ = *std::max_element(v.begin(), v.end());
    k.build_tables();
    k.check_or_throw(tol);
    return k;
}

double Kernel::eval(double x) const {
    const double ax = std::abs(x);
    if (ax >= radius_)
        return 0.0;
    switch (family_) {
    case KernelFamily::Triangular:
        return norm_ * (1.0 - ax / sigma_);
    case KernelFamily::Gaussian:
        return norm_ * std::exp(-0.5 * (x / sigma_) * (x / sigma_));
    case KernelFamily::Tabulated: {
        const double t = x / spacing_;
        int k = static_cast<int>(std::floor(t));
        k = std::clamp(k, -half_, half_ - 1);
        const double alpha = t - k;
        const double lo = tab_values_[static_cast<std::size_t>(k + half_)];
        const double hi = tab_values_[static_cast<std::size_t>(k + 1 + half_)];
        return (1.0 - alpha) * lo + alpha * hi;
    }
    }
    return 0.0;
}

double Kernel::tail_mass(double z) const {
    if (z <= -radius_)
        return 1.0;
    if (z >= radius_)
        return 0.0;
    const double t = z / spacing_;
    int k = static_cast<int>(std::floor(t));
    k = std::clamp(k, -half_, half_ - 1);
    const double alpha = t - k;
    const double lo = tail_table_[static_cast<std::size_t>(k + half_)];
    const double hi = tail_table_[static_cast<std::size_t>(k + 1 + half_)];
    return (1.0 - alpha) * lo + alpha * hi;
}

void Kernel::build_tables() {
    if (family_ != KernelFamily::Tabulated)
        half_ = static_cast<int>(std::ceil(radius_ / spacing_ - 1e-12));
    const std::size_t size = static_cast<std::size_t>(2 * half_ + 1);
    samples_.assign(size, 0.0);
    for (int k = 0; k <= half_; ++k) {
        const double v = eval(k * spacing_);
        samples_[static_cast<std::size_t>(half_ + k)] = v;
        samples_[static_cast<std::size_t>(half_ - k)] = v;
    }

    // Quadrature-calibrate the sampled representation: the discrete trapezoid
    // mass of the samples is what grid convolutions see, so it must be 1 to
    // rounding. The analytic eval() is left untouched.
    const double mass = trapezoid_mass(samples_, spacing_);
    if (mass > 0.0) {
        for (double &s : samples_)
            s /= mass;
        mass_correction_ = std::max(mass_correction_, std::abs(mass - 1.0));
    }

    tail_table_.assign(size, 0.0);
    if (family_ == KernelFamily::Triangular) {
        for (int k = 0; k <= half_; ++k) {
            const double z = std::min(k * spacing_, sigma_);
            const double t = (sigma_ - z) * (sigma_ - z) / (2.0 * sigma_ * sigma_);
            tail_table_[static_cast<std::size_t>(half_ + k)] = t;
            tail_table_[static_cast<std::size_t>(half_ - k)] = 1.0 - t;
        }
    } else if (family_ == KernelFamily::Gaussian) {
        const double s2 = sigma_ * std::sqrt(2.0);
        const double erf_r = std::erf(radius_ / s2);
        for (int k = 0; k <= half_; ++k) {
            const double z = std::min(k * spacing_, radius_);
            const double t = 0.5 * (erf_r - std::erf(z / s2)) / erf_r;
            tail_table_[static_cast<std::size_t>(half_ + k)] = t;
            tail_table_[static_cast<std::size_t>(half_ - k)] = 1.0 - t;
        }
    } else {
        // Cumulative trapezoid from the right on the calibrated samples, then
        // mirrored so T(z) + T(-z) = 1 holds exactly on the table.
        std::vector<double> cum(size, 0.0);
        for (int k = half_ - 1; k >= 0; --k) {
            const std::size_t i = static_cast<std::size_t>(half_ + k);
            cum[i] = cum[i + 1] + 0.5 * spacing_ * (samples_[i] + samples_[i + 1]);
        }
        for (int k = 0; k <= half_; ++k) {
            tail_table_[static_cast<std::size_t>(half_ + k)] = cum[static_cast<std::size_t>(half_ + k)];
            tail_table_[static_cast<std::size_t>(half_ - k)] =
                1.0 - cum[static_cast<std::size_t>(half_ + k)];
        }
        tail_table_[static_cast<std::size_t>(half_)] = 0.5;
    }
    tail_table_.front() = 1.0 - tail_table_.back();
}

void Kernel::check_or_throw(const KernelTolerances &tol) {
    const ValidationReport report = validate(tol);
    if (!report.passed) {
        std::ostringstream os;
        os << "kernel: validation failed:";
        for (const auto &c : report.checks)
            if (!c.pass)
                os << " [" << c.name << " measured=" << c.measured << "]";
        fail_config(os.str());
    }
}

ValidationReport Kernel::validate(const KernelTolerances &tol) const {
    ValidationReport report;
    report.strictly_positive = strictly_positive_;
    report.mass_correction = mass_correction_;

    double even_dev = 0.0;
    for (int k = 0; k <= half_; ++k)
        even_dev = std::max(even_dev, std::abs(eval(k * spacing_) - eval(-k * spacing_)));
    report.add("even", even_dev <= 1e-12 * std::max(1.0, sup_), even_dev);

    const double min_sample = *std::min_element(samples_.begin(), samples_.end());
    report.add("nonnegative", min_sample >= 0.0, min_sample);

    const double origin = eval(0.0);
    report.add("positive_at_origin", origin > 0.0, origin);

    const double mass = trapezoid_mass(samples_, spacing_);
    report.add("unit_mass", std::abs(mass - 1.0) <= tol.mass_tol, mass);

    report.add("bounded", std::isfinite(sup_) && sup_ > 0.0, sup_);

    double tail_sum_dev = 0.0;
    double tail_monotone = 0.0; // largest increase, should be <= 0
    for (int k = 0; k <= half_; ++k) {
        const double z = k * spacing_;
        tail_sum_dev = std::max(tail_sum_dev, std::abs(tail_mass(z) + tail_mass(-z) - 1.0));
        if (k > 0) {
            const std::size_t i = static_cast<std::size_t>(half_ + k);
            tail_monotone = std::max(tail_monotone, tail_table_[i] - tail_table_[i - 1]);
            const std::size_t im = static_cast<std::size_t>(half_ - k);
            tail_monotone = std::max(tail_monotone, tail_table_[im + 1] - tail_table_[im]);
        }
    }
    report.add("tail_symmetry", tail_sum_dev <= 1e-10, tail_sum_dev);
    report.add("tail_monotone", tail_monotone <= 1e-14, tail_monotone);
    report.add("tail_endpoints",
               std::abs(tail_mass(-radius_) - 1.0) <= 1e-12 && tail_mass(radius_) <= 1e-12 &&
                   std::abs(tail_mass(0.0) - 0.5) <= 1e-12,
               tail_mass(0.0));
    return report;
}

std::string Kernel::family_name() const {
    switch (family_) {
    case KernelFamily::Triangular:
        return "triangular";
    case KernelFamily::Gaussian:
        return "gaussian";
    case KernelFamily::Tabulated:
        return "tabulated";
    }
    return "?";
}

} // namespace frontspread
