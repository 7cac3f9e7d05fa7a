#pragma once

#include <string>
#include <vector>

namespace frontspread {

enum class KernelFamily { Triangular, Gaussian, Tabulated };

struct KernelTolerances {
    double mass_tol = 1e-8;     // allowed |mass - 1| after renormalization
    double renorm_limit = 1e-2; // largest |mass - 1| the loader will silently correct
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed = true;
    bool strictly_positive = false; // true only for unbounded-support families
    double mass_correction = 0.0;   // relative renormalization applied at construction

    void add(const std::string &name, bool pass, double measured, const std::string &detail = "");
};

/// A dispersal density: even, nonnegative, unit mass, positive at the origin,
/// bounded. Immutable once built; safe to share between threads.
///
/// Besides point evaluation, the kernel carries the tail-mass function
/// T(z) = integral of J over [z, inf), precomputed on a uniform table whose
/// spacing matches the field grid so flux quadrature needs no resampling.
class Kernel {
  public:
    /// Hat profile on [-sigma, sigma], peak 1/sigma at the origin.
    static Kernel triangular(double sigma, double spacing);
    /// Gaussian with scale sigma, truncated at |x| = cutoff and renormalized
    /// to unit mass. The discarded tail mass is recorded, not hidden.
    static Kernel gaussian(double sigma, double cutoff, double spacing);
    /// Sampled profile on a symmetric uniform grid. Renormalized to unit mass
    /// when the quadrature mass is within the tolerance limit.
    static Kernel tabulated(const std::vector<double> &x, const std::vector<double> &j,
                            const KernelTolerances &tol = {});

    /// J(x); exact formula for the analytic families, linear interpolation for
    /// tabulated ones, and 0 outside the support. Total function.
    double eval(double x) const;

    /// T(z) from the precomputed table with linear interpolation.
    /// Exact endpoints: T(z) = 1 for z <= -R and 0 for z >= R.
    double tail_mass(double z) const;

    /// Re-runs every kernel contract clause and reports pass/fail per clause.
    ValidationReport validate(const KernelTolerances &tol = {}) const;

    KernelFamily family() const { return family_; }
    double support_radius() const { return radius_; }
    double spacing() const { return spacing_; }
    double sup() const { return sup_; }
    bool strictly_positive() const { return strictly_positive_; }
    double mass_correction() const { return mass_correction_; }

    /// Samples J(k * spacing), k = -half_points .. half_points.
    const std::vector<double> &samples() const { return samples_; }
    int half_points() const { return half_; }
    double sample_x(int k) const { return k * spacing_; }

    std::string family_name() const;

  private:
    Kernel() = default;
    void build_tables();
    void check_or_throw(const KernelTolerances &tol);

    KernelFamily family_ = KernelFamily::Triangular;
    double sigma_ = 1.0;
    double radius_ = 1.0;   // support radius R (cutoff for the Gaussian)
    double spacing_ = 0.05; // table spacing
    double norm_ = 1.0;     // leading constant of the analytic formula
    double sup_ = 0.0;
    bool strictly_positive_ = false;
    double mass_correction_ = 0.0;
    int half_ = 0;
    std::vector<double> samples_;    // J at k*spacing, k in [-half, half]
    std::vector<double> tail_table_; // T at k*spacing, k in [-half, half]
    std::vector<double> tab_values_; // raw tabulated samples (Tabulated only)
};

} // namespace frontspread
