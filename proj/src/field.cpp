#include "frontspread/field.hpp"

#include "frontspread/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

namespace frontspread {

namespace {

std::mutex &fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

int next_pow2(int v) {
    int p = 1;
    while (p < v)
        p <<= 1;
    return p;
}

/// Composite trapezoid over [g, h] with fractional end cells. node_val(i)
/// evaluates the integrand at grid node i, point_val(x) at an arbitrary point.
template <typename NodeVal, typename PointVal>
double integral_over(const Grid &grid, double g, double h, NodeVal &&node_val,
                     PointVal &&point_val) {
    if (!(h > g))
        return 0.0;
    const int i0 = grid.first_inside(g);
    const int i1 = grid.last_inside(h);
    if (i0 > i1)
        return (h - g) * 0.5 * (point_val(g) + point_val(h));
    double sum = 0.0;
    for (int i = i0; i < i1; ++i)
        sum += 0.5 * grid.dx * (node_val(i) + node_val(i + 1));
    sum += (grid.x(i0) - g) * 0.5 * (point_val(g) + node_val(i0));
    sum += (h - grid.x(i1)) * 0.5 * (node_val(i1) + point_val(h));
    return sum;
}

} // namespace

Grid Grid::symmetric(double half_width, double dx) {
    if (!(half_width > 0.0) || !(dx > 0.0))
        fail_config("grid: half_width and dx must be positive");
    const double points = half_width / dx;
    if (points > 2.5e7)
        fail_config("grid: more than 5e7 nodes requested; widen dx or shrink half_width");
    const int half = static_cast<int>(std::ceil(points - 1e-12));
    Grid grid;
    grid.dx = dx;
    grid.n = 2 * half + 1;
    grid.x_min = -half * dx;
    return grid;
}

int Grid::first_inside(double g) const {
    const int i = static_cast<int>(std::floor((g - x_min) / dx)) + 1;
    return std::clamp(i, 0, n);
}

int Grid::last_inside(double h) const {
    const int i = static_cast<int>(std::ceil((h - x_min) / dx)) - 1;
    return std::clamp(i, -1, n - 1);
}

double Grid::interp(std::span<const double> u, double xq) const {
    const double t = (xq - x_min) / dx;
    int k = static_cast<int>(std::floor(t));
    k = std::clamp(k, 0, n - 2);
    const double alpha = t - k;
    return (1.0 - alpha) * u[static_cast<std::size_t>(k)] +
           alpha * u[static_cast<std::size_t>(k + 1)];
}

void convolve_serial(const Grid &grid, std::span<const double> taps, int half,
                     std::span<const double> u, std::span<double> out) {
    const int n = grid.n;
    const double dx = grid.dx;
    for (int i = 0; i < n; ++i) {
        const int j_lo = std::max(0, i - half);
        const int j_hi = std::min(n - 1, i + half);
        double s = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 * dx : dx;
            s += taps[static_cast<std::size_t>(half + i - j)] * w * u[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = s;
    }
}

void convolve_direct(const Grid &grid, std::span<const double> taps, int half,
                     std::span<const double> u, std::span<double> out) {
    const int n = grid.n;
    const double dx = grid.dx;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const int j_lo = std::max(0, i - half);
        const int j_hi = std::min(n - 1, i + half);
        double s = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 * dx : dx;
            s += taps[static_cast<std::size_t>(half + i - j)] * w * u[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = s;
    }
}

struct FftConvolver::Impl {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    double *real = nullptr;
    fftw_complex *spec = nullptr;
    fftw_complex *taps_spec = nullptr;
};

FftConvolver::FftConvolver(int n, std::span<const double> taps, int half)
    : impl_(std::make_unique<Impl>()), n_(n) {
    m_ = next_pow2(n + 2 * half + 1);
    const int mc = m_ / 2 + 1;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        impl_->real = fftw_alloc_real(static_cast<std::size_t>(m_));
        impl_->spec = fftw_alloc_complex(static_cast<std::size_t>(mc));
        impl_->taps_spec = fftw_alloc_complex(static_cast<std::size_t>(mc));
        impl_->fwd = fftw_plan_dft_r2c_1d(m_, impl_->real, impl_->spec, FFTW_ESTIMATE);
        impl_->inv = fftw_plan_dft_c2r_1d(m_, impl_->spec, impl_->real, FFTW_ESTIMATE);
    }
    std::fill(impl_->real, impl_->real + m_, 0.0);
    for (int k = -half; k <= half; ++k)
        impl_->real[(k + m_) % m_] = taps[static_cast<std::size_t>(k + half)];
    fftw_execute(impl_->fwd);
    std::memcpy(impl_->taps_spec, impl_->spec, sizeof(fftw_complex) * static_cast<std::size_t>(mc));
}

FftConvolver::~FftConvolver() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    if (impl_->fwd)
        fftw_destroy_plan(impl_->fwd);
    if (impl_->inv)
        fftw_destroy_plan(impl_->inv);
    fftw_free(impl_->real);
    fftw_free(impl_->spec);
    fftw_free(impl_->taps_spec);
}

void FftConvolver::apply(std::span<const double> weighted, std::span<double> out) {
    const int mc = m_ / 2 + 1;
    std::copy(weighted.begin(), weighted.end(), impl_->real);
    std::fill(impl_->real + n_, impl_->real + m_, 0.0);
    fftw_execute(impl_->fwd);
    for (int k = 0; k < mc; ++k) {
        const double re = impl_->spec[k][0] * impl_->taps_spec[k][0] -
                          impl_->spec[k][1] * impl_->taps_spec[k][1];
        const double im = impl_->spec[k][0] * impl_->taps_spec[k][1] +
                          impl_->spec[k][1] * impl_->taps_spec[k][0];
        impl_->spec[k][0] = re;
        impl_->spec[k][1] = im;
    }
    fftw_execute(impl_->inv);
    const double scale = 1.0 / m_;
    for (int i = 0; i < n_; ++i)
        out[static_cast<std::size_t>(i)] = impl_->real[i] * scale;
}

Convolver::Convolver(const Grid &grid, const Kernel &kernel, ConvPath path) : grid_(grid) {
    half_ = static_cast<int>(std::ceil(kernel.support_radius() / grid.dx - 1e-12));
    taps_.assign(static_cast<std::size_t>(2 * half_ + 1), 0.0);
    for (int k = 0; k <= half_; ++k) {
        const double v = kernel.eval(k * grid.dx);
        taps_[static_cast<std::size_t>(half_ + k)] = v;
        taps_[static_cast<std::size_t>(half_ - k)] = v;
    }
    // Calibrate so an interior row sums to exactly unit mass under the grid
    // quadrature; this is what makes J*1 = 1 away from the ambient edges.
    double mass = 0.0;
    for (double t : taps_)
        mass += t * grid.dx;
    if (!(mass > 0.0))
        fail_config("convolver: kernel support is below the grid resolution");
    for (double &t : taps_)
        t /= mass;

    if (path == ConvPath::Auto) {
        // Direct cost per row ~ 2*half+1 madds; transform cost per row
        // ~ a few log2(m) flops. Small supports favor the direct sum.
        const int m = next_pow2(grid.n + 2 * half_ + 1);
        const double direct_cost = static_cast<double>(grid.n) * (2.0 * half_ + 1.0);
        const double fft_cost = 7.5 * m * std::log2(static_cast<double>(m));
        path = direct_cost <= fft_cost ? ConvPath::Direct : ConvPath::Fft;
    }
    path_ = path;
    if (path_ == ConvPath::Fft) {
        fft_ = std::make_unique<FftConvolver>(grid.n, taps_, half_);
        weighted_.assign(static_cast<std::size_t>(grid.n), 0.0);
    }
}

void Convolver::apply(std::span<const double> u, std::span<double> out) {
    switch (path_) {
    case ConvPath::Serial:
        convolve_serial(grid_, taps_, half_, u, out);
        return;
    case ConvPath::Direct:
        convolve_direct(grid_, taps_, half_, u, out);
        return;
    case ConvPath::Fft: {
        const int n = grid_.n;
        for (int j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 * grid_.dx : grid_.dx;
            weighted_[static_cast<std::size_t>(j)] = w * u[static_cast<std::size_t>(j)];
        }
        fft_->apply(weighted_, out);
        return;
    }
    case ConvPath::Auto:
        break;
    }
    convolve_direct(grid_, taps_, half_, u, out);
}

double domain_integral(const Grid &grid, double g, double h, std::span<const double> u) {
    return integral_over(
        grid, g, h, [&](int i) { return u[static_cast<std::size_t>(i)]; },
        [&](double xq) { return grid.interp(u, xq); });
}

FluxPair boundary_flux(const Grid &grid, const Kernel &kernel, double g, double h,
                       std::span<const double> u) {
    FluxPair flux;
    flux.right = integral_over(
        grid, g, h,
        [&](int i) { return u[static_cast<std::size_t>(i)] * kernel.tail_mass(h - grid.x(i)); },
        [&](double xq) { return grid.interp(u, xq) * kernel.tail_mass(h - xq); });
    flux.left = integral_over(
        grid, g, h,
        [&](int i) { return u[static_cast<std::size_t>(i)] * kernel.tail_mass(grid.x(i) - g); },
        [&](double xq) { return grid.interp(u, xq) * kernel.tail_mass(xq - g); });
    return flux;
}

} // namespace frontspread
