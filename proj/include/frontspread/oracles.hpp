#pragma once

#include "frontspread/evolver.hpp"
#include "frontspread/field.hpp"
#include "frontspread/kernel.hpp"

#include <functional>
#include <span>
#include <vector>

namespace frontspread::oracle {

/// Outward fluxes by brute-force quadrature of the double integrals
///   right: int over [g,h] dx int over [h, inf) dy J(x-y) u(x)
///   left:  int over [g,h] dx int over (-inf, g] dy J(x-y) u(x)
/// The inner integral is resolved by a fine trapezoid of the kernel itself,
/// independent of the tail-mass table.
FluxPair flux_two_dim(const Grid &grid, const Kernel &kernel, double g, double h,
                      std::span<const double> u, int inner_points = 20001);

/// Independently coded single-species free-boundary solver (one density, one
/// kernel, logistic growth u(a - b u)). Same discretization contract as the
/// coupled solver, written standalone; used to check the coupled solver's
/// single-species reduction.
struct ScalarTrajectory {
    std::vector<double> t, g, h;
    std::vector<std::vector<double>> u; // one full-grid array per recorded step
};

ScalarTrajectory scalar_free_boundary_run(const Grid &grid, const Kernel &kernel, double d,
                                          double mu, double a, double b, double h0,
                                          const std::function<double(double)> &u0, double dt,
                                          double t_final, double picard_tol, int picard_max_iters);

/// Dominating fixture for comparison tests in the competition case: both
/// species follow the decoupled linear equation with rate a_i on the frozen
/// interval [-h1, h1], and the boundaries expand at the prescribed
/// exponentially decaying rate. Valid as an upper solution whenever
/// mu1 + mu2 <= lambda-derived budget returned in mu_budget.
struct UpperFixture {
    Trajectory trajectory;
    double lambda = 0;    // max of the two interval eigenvalues (must be < 0)
    double scale_c = 0;   // profile majorant constant
    double mu_budget = 0; // largest admissible mu1 + mu2
};

UpperFixture linear_upper_fixture(const Grid &grid, const Kernel &k1, const Kernel &k2, double d1,
                                  double d2, double a1, double a2, double h0, double h1,
                                  const std::function<double(double)> &u10,
                                  const std::function<double(double)> &u20, double mu1, double mu2,
                                  double dt, double t_final, int snapshot_every);

} // namespace frontspread::oracle
