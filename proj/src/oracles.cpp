#include "frontspread/oracles.hpp"

#include "frontspread/errors.hpp"
#include "frontspread/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace frontspread::oracle {

namespace {

/// Fine trapezoid of J over [z, R]; equals the tail mass without touching the
/// precomputed table.
double tail_by_quadrature(const Kernel &kernel, double z, int points) {
    const double radius = kernel.support_radius();
    if (z >= radius)
        return 0.0;
    const double lo = std::max(z, -radius);
    double sum = 0.5 * (kernel.eval(lo) + kernel.eval(radius));
    const double step = (radius - lo) / (points - 1);
    for (int k = 1; k + 1 < points; ++k)
        sum += kernel.eval(lo + k * step);
    return sum * step;
}

} // namespace

FluxPair flux_two_dim(const Grid &grid, const Kernel &kernel, double g, double h,
                      std::span<const double> u, int inner_points) {
    // x-quadrature mirrors the field module's structure (trapezoid at nodes,
    // interpolated fractional end cells) but resolves the inner y-integral by
    // quadrature of the kernel itself.
    const auto inner_right = [&](double x) { return tail_by_quadrature(kernel, h - x, inner_points); };
    const auto inner_left = [&](double x) { return tail_by_quadrature(kernel, x - g, inner_points); };

    FluxPair flux;
    const int i0 = grid.first_inside(g);
    const int i1 = grid.last_inside(h);
    if (i0 > i1) {
        flux.right = (h - g) * 0.5 *
                     (grid.interp(u, g) * inner_right(g) + grid.interp(u, h) * inner_right(h));
        flux.left = (h - g) * 0.5 *
                    (grid.interp(u, g) * inner_left(g) + grid.interp(u, h) * inner_left(h));
        return flux;
    }
    double right = 0.0, left = 0.0;
    for (int i = i0; i < i1; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        right += 0.5 * grid.dx *
                 (u[k] * inner_right(grid.x(i)) + u[k + 1] * inner_right(grid.x(i + 1)));
        left += 0.5 * grid.dx *
                (u[k] * inner_left(grid.x(i)) + u[k + 1] * inner_left(grid.x(i + 1)));
    }
    right += (grid.x(i0) - g) * 0.5 *
             (grid.interp(u, g) * inner_right(g) +
              u[static_cast<std::size_t>(i0)] * inner_right(grid.x(i0)));
    right += (h - grid.x(i1)) * 0.5 *
             (u[static_cast<std::size_t>(i1)] * inner_right(grid.x(i1)) +
              grid.interp(u, h) * inner_right(h));
    left += (grid.x(i0) - g) * 0.5 *
            (grid.interp(u, g) * inner_left(g) +
             u[static_cast<std::size_t>(i0)] * inner_left(grid.x(i0)));
    left += (h - grid.x(i1)) * 0.5 *
            (u[static_cast<std::size_t>(i1)] * inner_left(grid.x(i1)) +
             grid.interp(u, h) * inner_left(h));
    flux.right = right;
    flux.left = left;
    return flux;
}

ScalarTrajectory scalar_free_boundary_run(const Grid &grid, const Kernel &kernel, double d,
                                          double mu, double a, double b, double h0,
                                          const std::function<double(double)> &u0, double dt,
                                          double t_final, double picard_tol,
                                          int picard_max_iters) {
    const int n = grid.n;
    // Taps and calibration, written out directly.
    const int half = static_cast<int>(std::ceil(kernel.support_radius() / grid.dx - 1e-12));
    std::vector<double> taps(static_cast<std::size_t>(2 * half + 1), 0.0);
    for (int k = -half; k <= half; ++k)
        taps[static_cast<std::size_t>(k + half)] = kernel.eval(k * grid.dx);
    double mass = 0.0;
    for (double t : taps)
        mass += t * grid.dx;
    for (double &t : taps)
        t /= mass;

    std::vector<double> u(static_cast<std::size_t>(n), 0.0);
    for (int i = grid.first_inside(-h0); i <= grid.last_inside(h0); ++i)
        u[static_cast<std::size_t>(i)] = u0(grid.x(i));

    double g = -h0, h = h0, t = 0.0;
    ScalarTrajectory out;
    const auto record = [&]() {
        out.t.push_back(t);
        out.g.push_back(g);
        out.h.push_back(h);
        out.u.push_back(u);
    };
    record();

    std::vector<double> v(u), w(u), conv(static_cast<std::size_t>(n), 0.0);
    const long nsteps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    for (long stepk = 1; stepk <= nsteps; ++stepk) {
        const int i0 = grid.first_inside(g);
        const int i1 = grid.last_inside(h);
        v = u;
        std::fill(w.begin(), w.end(), 0.0);
        bool converged = false;
        for (int m = 0; m < picard_max_iters; ++m) {
            for (int i = 0; i < n; ++i) {
                const int j_lo = std::max(0, i - half);
                const int j_hi = std::min(n - 1, i + half);
                double s = 0.0;
                for (int j = j_lo; j <= j_hi; ++j) {
                    const double wq = (j == 0 || j == n - 1) ? 0.5 * grid.dx : grid.dx;
                    s += taps[static_cast<std::size_t>(half + i - j)] * wq *
                         v[static_cast<std::size_t>(j)];
                }
                conv[static_cast<std::size_t>(i)] = s;
            }
            double diff = 0.0;
            for (int i = i0; i <= i1; ++i) {
                const std::size_t k = static_cast<std::size_t>(i);
                const double vv = std::max(v[k], 0.0);
                const double f = vv * (a - b * vv);
                const double next = u[k] + dt * (d * (conv[k] - v[k]) + f);
                diff = std::max(diff, std::abs(next - v[k]));
                w[k] = next;
            }
            std::swap(v, w);
            if (diff < picard_tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw Error(ErrorCode::NumericAbort, "scalar oracle: inner iteration stalled");
        for (int i = i0; i <= i1; ++i) {
            std::size_t k = static_cast<std::size_t>(i);
            if (v[k] < 0.0)
                v[k] = 0.0;
        }

        // Tail-weighted single integrals, same quadrature contract.
        const FluxPair flux = boundary_flux(grid, kernel, g, h, v);
        const double hp = mu * flux.right;
        const double gp = -mu * flux.left;
        u = v;
        g += dt * gp;
        h += dt * hp;
        t += dt;
        record();
    }
    return out;
}

UpperFixture linear_upper_fixture(const Grid &grid, const Kernel &k1, const Kernel &k2, double d1,
                                  double d2, double a1, double a2, double h0, double h1,
                                  const std::function<double(double)> &u10,
                                  const std::function<double(double)> &u20, double mu1, double mu2,
                                  double dt, double t_final, int snapshot_every) {
    if (!(h1 > h0))
        fail_config("fixture: h1 must exceed h0");

    // Interval eigenpairs on nodes aligned with the field grid.
    const int j0 = grid.first_inside(-h1 - 0.5 * grid.dx);
    const int j1 = grid.last_inside(h1 + 0.5 * grid.dx);
    const int n_nodes = j1 - j0 + 1;
    if (n_nodes < 64)
        fail_config("fixture: fewer than 64 grid nodes in [-h1, h1]; refine dx or widen h1");
    const double lo = grid.x(j0), hi = grid.x(j1);
    const EigenResult e1 = principal_eigenvalue(
        SpectralProblem::constant_theta(d1, k1, lo, hi, a1, n_nodes));
    const EigenResult e2 = principal_eigenvalue(
        SpectralProblem::constant_theta(d2, k2, lo, hi, a2, n_nodes));
    const double lambda = std::max(e1.lambda_p, e2.lambda_p);
    if (!(lambda < 0.0))
        fail_config("fixture: interval eigenvalues must be negative; shrink h1");

    double scale_c = 0.0;
    for (int i = j0; i <= j1; ++i) {
        const double x = grid.x(i);
        const double phi1 = e1.eigenfunction[static_cast<std::size_t>(i - j0)];
        const double phi2 = e2.eigenfunction[static_cast<std::size_t>(i - j0)];
        if (std::abs(x) < h0) {
            scale_c = std::max(scale_c, u10(x) / std::max(phi1, 1e-300));
            scale_c = std::max(scale_c, u20(x) / std::max(phi2, 1e-300));
        }
    }
    scale_c *= 1.01;

    UpperFixture fixture;
    fixture.lambda = lambda;
    fixture.scale_c = scale_c;
    fixture.mu_budget = -lambda * (h1 - h0) / (4.0 * scale_c * h1);
    if (mu1 + mu2 > fixture.mu_budget)
        fail_config("fixture: mu1 + mu2 exceeds the admissible budget for an upper solution");

    const double rate = 2.0 * (mu1 + mu2) * scale_c * h1;
    const auto r_of = [&](double t) {
        return h0 + rate * (2.0 / lambda) * (std::exp(0.5 * lambda * t) - 1.0);
    };
    const auto rp_of = [&](double t) { return rate * std::exp(0.5 * lambda * t); };

    Convolver conv1(grid, k1, ConvPath::Serial);
    Convolver conv2(grid, k2, ConvPath::Serial);
    const std::size_t n = static_cast<std::size_t>(grid.n);
    std::vector<double> w1(n, 0.0), w2(n, 0.0);
    for (int i = grid.first_inside(-h0); i <= grid.last_inside(h0); ++i) {
        w1[static_cast<std::size_t>(i)] = u10(grid.x(i));
        w2[static_cast<std::size_t>(i)] = u20(grid.x(i));
    }

    Trajectory traj;
    traj.grid = grid;
    traj.dt = dt;
    const auto record = [&](double t) {
        TrajectoryRow row;
        row.t = t;
        row.g = -r_of(t);
        row.h = r_of(t);
        row.gp = -rp_of(t);
        row.hp = rp_of(t);
        row.mass1 = domain_integral(grid, row.g, row.h, w1);
        row.mass2 = domain_integral(grid, row.g, row.h, w2);
        row.max1 = *std::max_element(w1.begin(), w1.end());
        row.max2 = *std::max_element(w2.begin(), w2.end());
        traj.rows.push_back(row);
    };
    const auto snapshot = [&](double t) {
        FieldSnapshot snap;
        snap.t = t;
        snap.g = -r_of(t);
        snap.h = r_of(t);
        snap.u1 = w1;
        snap.u2 = w2;
        traj.snapshots.push_back(std::move(snap));
    };

    record(0.0);
    if (snapshot_every > 0)
        snapshot(0.0);

    std::vector<double> v(n, 0.0), next(n, 0.0), cbuf(n, 0.0);
    const auto advance = [&](std::vector<double> &w, Convolver &conv, double d, double a) {
        v = w;
        std::fill(next.begin(), next.end(), 0.0);
        for (int m = 0; m < 400; ++m) {
            conv.apply(v, cbuf);
            double diff = 0.0;
            for (int i = j0; i <= j1; ++i) {
                const std::size_t k = static_cast<std::size_t>(i);
                const double nv = w[k] + dt * (d * (cbuf[k] - v[k]) + a * v[k]);
                diff = std::max(diff, std::abs(nv - v[k]));
                next[k] = nv;
            }
            std::swap(v, next);
            if (diff < 1e-13)
                break;
        }
        w = v;
    };

    const long nsteps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    for (long k = 1; k <= nsteps; ++k) {
        advance(w1, conv1, d1, a1);
        advance(w2, conv2, d2, a2);
        const double t = k * dt;
        record(t);
        if (snapshot_every > 0 && (k % snapshot_every == 0 || k == nsteps))
            snapshot(t);
    }
    fixture.trajectory = std::move(traj);
    return fixture;
}

} // namespace frontspread::oracle
