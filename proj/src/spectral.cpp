#include "frontspread/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace frontspread {

SpectralProblem SpectralProblem::constant_theta(double d, const Kernel &kernel, double a, double b,
                                                double theta, int n_eig) {
    SpectralProblem p{d, kernel, a, b,
                      std::vector<double>(static_cast<std::size_t>(std::max(n_eig, 0)), theta),
                      n_eig};
    p.check();
    return p;
}

void SpectralProblem::check() const {
    if (!(a < b))
        fail_config("spectral: interval must satisfy a < b");
    if (n_eig < 64)
        fail_config("spectral: n_eig must be at least 64");
    if (theta.size() != static_cast<std::size_t>(n_eig))
        fail_config("spectral: theta must be sampled at the n_eig nodes");
    for (double t : theta)
        if (!std::isfinite(t))
            fail_config("spectral: theta must be bounded");
    if (!(d >= 0.0))
        fail_config("spectral: diffusion rate must be nonnegative");
}

OperatorMatrix assemble(const SpectralProblem &p) {
    p.check();
    const int n = p.n_eig;
    const double dxe = (p.b - p.a) / (n - 1);
    OperatorMatrix m;
    m.n = n;
    m.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    // Exact kernel mass per node cell (half cells at the ends), via the tail
    // function: the masses of one row tile the interval, so each row's
    // kernel quadrature telescopes to at most the unit total mass. Point
    // sampling with trapezoid weights can overshoot 1 and push the
    // eigenvalue above the coefficient bound; cell masses cannot.
    for (int i = 0; i < n; ++i) {
        const double xi = p.node(i);
        for (int j = 0; j < n; ++j) {
            const double left = (j == 0) ? p.a : p.node(j) - 0.5 * dxe;
            const double right = (j == n - 1) ? p.b : p.node(j) + 0.5 * dxe;
            m.at(i, j) = p.d * (p.kernel.tail_mass(xi - right) - p.kernel.tail_mass(xi - left));
        }
        m.at(i, i) += -p.d + p.theta[static_cast<std::size_t>(i)];
    }
    return m;
}

void matvec_serial(const OperatorMatrix &m, std::span<const double> x, std::span<double> y) {
    const int n = m.n;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        const double *row = &m.entries[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j)
            s += row[j] * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
}

void matvec_omp(const OperatorMatrix &m, std::span<const double> x, std::span<double> y) {
    const int n = m.n;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        const double *row = &m.entries[static_cast<std::size_t>(i) * n];
        for (int j = 0; j < n; ++j)
            s += row[j] * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
}

EigenResult principal_eigenvalue(const SpectralProblem &p, const PowerIterOptions &opt) {
    const OperatorMatrix m = assemble(p);
    const int n = m.n;
    double theta_max = 0.0;
    for (double t : p.theta)
        theta_max = std::max(theta_max, std::abs(t));
    const double shift = p.d + theta_max + 1.0; // makes the iteration matrix entrywise nonnegative

    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);

    double rho_prev = 0.0, rho_prev2 = 0.0;
    int iters = 0;
    bool converged = false;
    for (int it = 0; it < opt.max_iters; ++it) {
        if (opt.parallel)
            matvec_omp(m, x, y);
        else
            matvec_serial(m, x, y);
        // x is unit in the 2-norm, so the Rayleigh quotient is x.y (+ shift).
        double rho = std::inner_product(x.begin(), x.end(), y.begin(), 0.0) + shift;
        double residual = 0.0;
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            y[k] += shift * x[k];
            residual = std::max(residual, std::abs(y[k] - rho * x[k]));
            norm += y[k] * y[k];
        }
        norm = std::sqrt(norm);
        if (!(norm > 0.0))
            throw Error(ErrorCode::NumericAbort, "spectral: power iteration collapsed to zero");
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / norm;
        iters = it + 1;
        // quotient stall plus a small eigen residual, so near-degenerate
        // spectra cannot trigger a premature stop
        if (it >= 2 && std::abs(rho - rho_prev) < opt.rq_tol &&
            std::abs(rho_prev - rho_prev2) < 4.0 * opt.rq_tol &&
            residual <= 1e-9 * std::max(1.0, std::abs(rho))) {
            rho_prev = rho;
            converged = true;
            break;
        }
        rho_prev2 = rho_prev;
        rho_prev = rho;
    }
    if (!converged) {
        std::ostringstream os;
        os << "spectral: power iteration did not converge in " << opt.max_iters << " iterations";
        throw Error(ErrorCode::NumericAbort, os.str());
    }

    EigenResult result;
    result.lambda_p = rho_prev - shift;
    result.iterations = iters;
    double sup = 0.0;
    for (double v : x)
        sup = std::max(sup, std::abs(v));
    result.eigenfunction.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        result.eigenfunction[static_cast<std::size_t>(i)] =
            std::abs(x[static_cast<std::size_t>(i)]) / sup;
    return result;
}

double principal_eigenvalue_dense(const SpectralProblem &p) {
    const OperatorMatrix m = assemble(p);
    const int n = m.n;
    std::vector<double> a(m.entries);
    std::vector<double> wr(static_cast<std::size_t>(n), 0.0);
    std::vector<double> wi(static_cast<std::size_t>(n), 0.0);
    const int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                                   wi.data(), nullptr, n, nullptr, n);
    if (info != 0)
        throw Error(ErrorCode::NumericAbort, "spectral: dense eigendecomposition failed");
    // The shifted matrix is entrywise nonnegative, so the dominant eigenvalue
    // is real and equals the largest real part.
    return *std::max_element(wr.begin(), wr.end());
}

CriticalLengthResult critical_length(double d, double a_const, const Kernel &kernel, double tol,
                                     int n_eig) {
    if (!(a_const > 0.0))
        fail_config("spectral: critical length needs a positive reaction rate");
    if (a_const >= d) {
        std::ostringstream os;
        os << "ALWAYS_POSITIVE: reaction rate " << a_const << " >= dispersal rate " << d
           << "; the eigenvalue has no zero crossing";
        throw AlwaysPositiveError(os.str());
    }
    if (!(tol > 0.0))
        fail_config("spectral: critical length tolerance must be positive");

    int solves = 0;
    const auto lambda_at = [&](double ell) {
        ++solves;
        const SpectralProblem p =
            SpectralProblem::constant_theta(d, kernel, 0.0, ell, a_const, n_eig);
        return principal_eigenvalue(p).lambda_p;
    };

    double lo = std::max(kernel.spacing(), 1e-4);
    double lam_lo = lambda_at(lo);
    while (lam_lo >= 0.0 && lo > 1e-8) {
        lo *= 0.5;
        lam_lo = lambda_at(lo);
    }
    if (lam_lo >= 0.0)
        throw Error(ErrorCode::NumericAbort, "spectral: no negative eigenvalue at tiny lengths");

    double hi = std::max(1.0, 2.0 * lo);
    double lam_hi = lambda_at(hi);
    while (lam_hi < 0.0) {
        lo = hi;
        lam_lo = lam_hi;
        hi *= 2.0;
        if (hi > 1e4)
            throw Error(ErrorCode::NumericAbort,
                        "spectral: bracket for the critical length exceeded the growth cap");
        lam_hi = lambda_at(hi);
    }

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double lam = lambda_at(mid);
        if (lam >= 0.0) {
            hi = mid;
            lam_hi = lam;
        } else {
            lo = mid;
            lam_lo = lam;
        }
    }

    // Polish with bracket-guarded regula falsi until the eigenvalue itself is
    // resolved, not just the length.
    double ell = 0.5 * (lo + hi);
    double lam = lambda_at(ell);
    for (int it = 0; it < 60 && std::abs(lam) > 1e-8; ++it) {
        if (lam >= 0.0) {
            hi = ell;
            lam_hi = lam;
        } else {
            lo = ell;
            lam_lo = lam;
        }
        double next = (lo * lam_hi - hi * lam_lo) / (lam_hi - lam_lo);
        if (!(next > lo) || !(next < hi))
            next = 0.5 * (lo + hi);
        ell = next;
        lam = lambda_at(ell);
    }

    CriticalLengthResult result;
    result.ell = ell;
    result.lambda_at_ell = lam;
    result.eigen_solves = solves;
    return result;
}

EllStarResult ell_star(double d1, double a1, const Kernel &k1, double d2, double a2,
                       const Kernel &k2, double tol, int n_eig) {
    EllStarResult r;
    r.ell1 = critical_length(d1, a1, k1, tol, n_eig).ell;
    r.ell2 = critical_length(d2, a2, k2, tol, n_eig).ell;
    r.ell_star = std::min(r.ell1, r.ell2);
    return r;
}

} // namespace frontspread
