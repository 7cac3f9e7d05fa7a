#pragma once

#include "frontspread/kernel.hpp"

#include <memory>
#include <span>
#include <vector>

namespace frontspread {

/// Fixed ambient grid. Densities live on it with zero extension outside the
/// moving domain, so boundary positions stay continuous scalars.
struct Grid {
    double x_min = 0.0;
    double dx = 0.0;
    int n = 0;

    /// Symmetric grid with a node exactly at the origin.
    static Grid symmetric(double half_width, double dx);

    double x(int i) const { return x_min + i * dx; }
    double x_max() const { return x(n - 1); }
    /// Smallest index with x_i > g (clamped to [0, n]).
    int first_inside(double g) const;
    /// Largest index with x_i < h (clamped to [-1, n-1]).
    int last_inside(double h) const;
    /// Linear interpolation of a sample array at an arbitrary coordinate.
    double interp(std::span<const double> u, double xq) const;

    bool operator==(const Grid &other) const = default;
};

enum class ConvPath { Auto, Direct, Fft, Serial };

/// out_i = sum_j w_j J(x_i - x_j) u_j with trapezoid weights w_j.
/// Serial reference implementation, kept as the oracle for the parallel and
/// transform paths.
void convolve_serial(const Grid &grid, std::span<const double> taps, int half,
                     std::span<const double> u, std::span<double> out);

/// Same sum, rows distributed over OpenMP threads. Per-row summation order is
/// identical to the serial path, so results are bit-equal.
void convolve_direct(const Grid &grid, std::span<const double> taps, int half,
                     std::span<const double> u, std::span<double> out);

/// Zero-padded circular transform; exact linear convolution of the same taps.
class FftConvolver {
  public:
    FftConvolver(int n, std::span<const double> taps, int half);
    ~FftConvolver();
    FftConvolver(const FftConvolver &) = delete;
    FftConvolver &operator=(const FftConvolver &) = delete;

    void apply(std::span<const double> weighted, std::span<double> out);
    int padded_size() const { return m_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int n_ = 0;
    int m_ = 0;
};

/// Facade that resamples the kernel onto the grid spacing, calibrates the tap
/// mass, and dispatches to the configured path.
class Convolver {
  public:
    Convolver(const Grid &grid, const Kernel &kernel, ConvPath path = ConvPath::Auto);

    void apply(std::span<const double> u, std::span<double> out);

    ConvPath resolved_path() const { return path_; }
    int taps_half() const { return half_; }
    std::span<const double> taps() const { return taps_; }

  private:
    Grid grid_;
    std::vector<double> taps_;
    int half_ = 0;
    ConvPath path_ = ConvPath::Direct;
    std::unique_ptr<FftConvolver> fft_;
    std::vector<double> weighted_;
};

/// Trapezoid quadrature of u over [g, h]; fractional end cells use linear
/// interpolation of the samples to g and h.
double domain_integral(const Grid &grid, double g, double h, std::span<const double> u);

struct FluxPair {
    double left = 0.0;
    double right = 0.0;
};

/// Outward boundary fluxes as single weighted integrals:
///   right = integral over [g,h] of u(x) T(h - x) dx,
///   left  = integral over [g,h] of u(x) T(x - g) dx,
/// where T is the kernel tail mass.
FluxPair boundary_flux(const Grid &grid, const Kernel &kernel, double g, double h,
                       std::span<const double> u);

} // namespace frontspread
