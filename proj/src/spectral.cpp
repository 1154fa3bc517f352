/// @file spectral.cpp
/// @brief FFTW wrapper implementation.

#include "ekman/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace ekman {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

SpectralWorkspace::SpectralWorkspace(const Grid2D& g)
    : grid_(g), nxk_(g.nx / 2 + 1), kx_(nxk_), ky_(g.ny),
      keep_x_(nxk_), keep_y_(g.ny), scratch_(static_cast<std::size_t>(nxk_) * g.ny) {
    for (int i = 0; i < nxk_; ++i) kx_[i] = kTwoPi * i / grid_.lx;
    for (int j = 0; j < grid_.ny; ++j) {
        const int js = (j <= grid_.ny / 2) ? j : j - grid_.ny;
        ky_[j] = kTwoPi * js / grid_.ly;
    }
    // 2/3 rule: keep |index| <= N/3; always drop the Nyquist mode.
    const int cx = grid_.nx / 3, cy = grid_.ny / 3;
    for (int i = 0; i < nxk_; ++i) keep_x_[i] = (i <= cx);
    for (int j = 0; j < grid_.ny; ++j) {
        const int js = (j <= grid_.ny / 2) ? j : j - grid_.ny;
        keep_y_[j] = (std::abs(js) <= cy && js != grid_.ny / 2);
    }

    // Plans are created once on scratch buffers and executed on caller arrays
    // via the new-array interface; FFTW_UNALIGNED keeps that legal for any
    // std::vector storage, and FFTW_ESTIMATE keeps planning deterministic.
    std::vector<double> rbuf(grid_.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan_r2c_ = fftw_plan_dft_r2c_2d(grid_.ny, grid_.nx, rbuf.data(),
                                     reinterpret_cast<fftw_complex*>(scratch_.data()), flags);
    plan_c2r_ = fftw_plan_dft_c2r_2d(grid_.ny, grid_.nx,
                                     reinterpret_cast<fftw_complex*>(scratch_.data()),
                                     rbuf.data(), flags);
    if (!plan_r2c_ || !plan_c2r_) throw std::runtime_error("SpectralWorkspace: FFTW planning failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
    if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

void SpectralWorkspace::forward(const Field2D& f, SpecField2D& out) const {
    if (f.grid() != grid_) throw std::invalid_argument("forward: grid mismatch");
    if (out.grid() != grid_) out = SpecField2D(grid_);
    // r2c does not modify its input, but the API is non-const; cast is safe.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_),
                         const_cast<double*>(f.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void SpectralWorkspace::inverse(const SpecField2D& f, Field2D& out) const {
    if (f.grid() != grid_) throw std::invalid_argument("inverse: grid mismatch");
    if (out.grid() != grid_) out = Field2D(grid_);
    // c2r destroys its input, so run on the scratch copy.
    scratch_.assign(f.data(), f.data() + f.size());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_),
                         reinterpret_cast<fftw_complex*>(scratch_.data()), out.data());
    const double s = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= s;
}

SpecField2D SpectralWorkspace::forward(const Field2D& f) const {
    SpecField2D out(grid_);
    forward(f, out);
    return out;
}

Field2D SpectralWorkspace::inverse(const SpecField2D& f) const {
    Field2D out(grid_);
    inverse(f, out);
    return out;
}

void SpectralWorkspace::deriv_x(SpecField2D& f) const {
    const std::complex<double> I(0.0, 1.0);
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nxk_; ++i) {
            // the Nyquist column has no well-defined real derivative; drop it
            if (i == grid_.nx / 2)
                f(i, j) = 0.0;
            else
                f(i, j) *= I * kx_[i];
        }
}

void SpectralWorkspace::deriv_y(SpecField2D& f) const {
    const std::complex<double> I(0.0, 1.0);
    for (int j = 0; j < grid_.ny; ++j) {
        const bool nyq = (j == grid_.ny / 2);
        for (int i = 0; i < nxk_; ++i) f(i, j) *= nyq ? std::complex<double>(0.0) : I * ky_[j];
    }
}

void SpectralWorkspace::laplacian(SpecField2D& f) const {
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nxk_; ++i) f(i, j) *= -(kx_[i] * kx_[i] + ky_[j] * ky_[j]);
}

void SpectralWorkspace::inv_laplacian(SpecField2D& f) const {
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nxk_; ++i) {
            const double k2 = kx_[i] * kx_[i] + ky_[j] * ky_[j];
            f(i, j) = (k2 == 0.0) ? std::complex<double>(0.0) : f(i, j) / (-k2);
        }
}

void SpectralWorkspace::dealias(SpecField2D& f) const {
    for (int j = 0; j < grid_.ny; ++j) {
        const bool ky_ok = keep_y_[j];
        for (int i = 0; i < nxk_; ++i)
            if (!ky_ok || !keep_x_[i]) f(i, j) = 0.0;
    }
}

Field2D SpectralWorkspace::dx(const Field2D& f) const {
    SpecField2D s = forward(f);
    deriv_x(s);
    return inverse(s);
}

Field2D SpectralWorkspace::dy(const Field2D& f) const {
    SpecField2D s = forward(f);
    deriv_y(s);
    return inverse(s);
}

Field2D SpectralWorkspace::laplacian(const Field2D& f) const {
    SpecField2D s = forward(f);
    laplacian(s);
    return inverse(s);
}

Field2D SpectralWorkspace::poisson(const Field2D& f) const {
    SpecField2D s = forward(f);
    inv_laplacian(s);
    return inverse(s);
}

Field2D SpectralWorkspace::dealias(const Field2D& f) const {
    SpecField2D s = forward(f);
    dealias(s);
    return inverse(s);
}

Field2D SpectralWorkspace::divergence(const VecField2D& u) const {
    SpecField2D sx = forward(u.x), sy = forward(u.y);
    deriv_x(sx);
    deriv_y(sy);
    for (std::size_t k = 0; k < sx.size(); ++k) sx[k] += sy[k];
    return inverse(sx);
}

Field2D SpectralWorkspace::curl(const VecField2D& u) const {
    SpecField2D sx = forward(u.x), sy = forward(u.y);
    deriv_y(sx);
    deriv_x(sy);
    for (std::size_t k = 0; k < sy.size(); ++k) sy[k] -= sx[k];
    return inverse(sy);
}

void SpectralWorkspace::project(VecField2D& u) const {
    SpecField2D sx = forward(u.x), sy = forward(u.y);
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nxk_; ++i) {
            // The Nyquist entries alias +-k onto one slot, so no projection
            // matrix is conjugate-consistent there; zero them instead (same
            // convention as the derivatives, and harmless for 2/3-truncated
            // states where those modes are empty).
            if (i == grid_.nx / 2 || j == grid_.ny / 2) {
                sx(i, j) = 0.0;
                sy(i, j) = 0.0;
                continue;
            }
            const double kx = kx_[i], ky = ky_[j];
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;  // mean mode is divergence-free
            const std::complex<double> kdotu = kx * sx(i, j) + ky * sy(i, j);
            sx(i, j) -= kx * kdotu / k2;
            sy(i, j) -= ky * kdotu / k2;
        }
    inverse(sx, u.x);
    inverse(sy, u.y);
}

double SpectralWorkspace::mean(const Field2D& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += f[k];
    return s / static_cast<double>(f.size());
}

double l2_norm(const Field2D& f) {
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * f[k];
    const double cell = f.grid().dx() * f.grid().dy();
    return std::sqrt(s * cell);
}

double l2_norm(const VecField2D& u) {
    const double a = l2_norm(u.x), b = l2_norm(u.y);
    return std::sqrt(a * a + b * b);
}

double linf_norm(const VecField2D& u) {
    double m = 0.0;
    for (std::size_t k = 0; k < u.x.size(); ++k)
        m = std::max(m, std::sqrt(u.x[k] * u.x[k] + u.y[k] * u.y[k]));
    return m;
}

}  // namespace ekman
