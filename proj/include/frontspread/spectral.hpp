#pragma once

#include "frontspread/errors.hpp"
#include "frontspread/kernel.hpp"

#include <span>
#include <vector>

namespace frontspread {

/// Thrown when the zero crossing of the principal eigenvalue does not exist
/// because the reaction rate already dominates the dispersal rate.
class AlwaysPositiveError : public Error {
  public:
    explicit AlwaysPositiveError(const std::string &what)
        : Error(ErrorCode::Unsupported, what) {}
};

/// Discretization of the operator
///   phi -> d (integral over (a,b) of J(x-y) phi(y) dy - phi(x)) + theta(x) phi(x)
/// on n_eig uniform nodes, one quadrature cell per node.
struct SpectralProblem {
    double d;
    Kernel kernel;
    double a;
    double b;
    std::vector<double> theta; // sampled at the nodes; constant in all shipped uses
    int n_eig;

    static SpectralProblem constant_theta(double d, const Kernel &kernel, double a, double b,
                                          double theta, int n_eig = 512);

    double node(int i) const { return a + i * (b - a) / (n_eig - 1); }
    void check() const;
};

/// Row-major dense operator matrix.
struct OperatorMatrix {
    int n = 0;
    std::vector<double> entries;

    double &at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
};

OperatorMatrix assemble(const SpectralProblem &problem);

/// y = M x. Serial reference and OpenMP row-parallel versions; the two are
/// bit-equal since each row is summed in index order by one thread.
void matvec_serial(const OperatorMatrix &m, std::span<const double> x, std::span<double> y);
void matvec_omp(const OperatorMatrix &m, std::span<const double> x, std::span<double> y);

struct PowerIterOptions {
    double rq_tol = 1e-10; // successive Rayleigh-quotient difference
    int max_iters = 500000;
    bool parallel = true;
};

struct EigenResult {
    double lambda_p = 0.0;
    std::vector<double> eigenfunction; // positive, normalized to sup = 1
    int iterations = 0;
};

/// Dominant eigenvalue via power iteration on the nonnegatively shifted
/// matrix, deterministic all-ones start.
EigenResult principal_eigenvalue(const SpectralProblem &problem, const PowerIterOptions &opt = {});

/// Same eigenvalue through a full dense eigendecomposition of the
/// similarity-symmetrized matrix (LAPACK). Kept as the independent route the
/// power iteration is checked against.
double principal_eigenvalue_dense(const SpectralProblem &problem);

struct CriticalLengthResult {
    double ell = 0.0;
    double lambda_at_ell = 0.0;
    int eigen_solves = 0;
};

/// Interval length at which the principal eigenvalue of the operator with
/// constant coefficient a_const crosses zero. Throws AlwaysPositiveError when
/// a_const >= d.
CriticalLengthResult critical_length(double d, double a_const, const Kernel &kernel,
                                     double tol = 1e-3, int n_eig = 512);

struct EllStarResult {
    double ell1 = 0.0;
    double ell2 = 0.0;
    double ell_star = 0.0;
};

EllStarResult ell_star(double d1, double a1, const Kernel &k1, double d2, double a2,
                       const Kernel &k2, double tol = 1e-3, int n_eig = 512);

} // namespace frontspread
