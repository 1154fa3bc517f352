/// @file spectral.hpp
/// @brief FFTW-based spectral toolbox: transforms, derivatives, inverse
///        Laplacian, 2/3 dealiasing and the Leray projection.

#pragma once

#include <complex>
#include <vector>

#include "ekman/field2d.hpp"
#include "ekman/grid.hpp"

namespace ekman {

/// One workspace per grid; owns the FFTW plans. All operations are
/// deterministic (single-threaded FFTW, FFTW_ESTIMATE planning) so repeated
/// runs produce bit-identical results.
///
/// Transform convention: forward() is the unnormalized real-to-complex DFT,
/// inverse() divides by nx*ny, so inverse(forward(f)) == f to round-off.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(const Grid2D& g);
    ~SpectralWorkspace();

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const Grid2D& grid() const { return grid_; }

    // ------------------------------------------------------------------
    // Transforms
    // ------------------------------------------------------------------
    void forward(const Field2D& f, SpecField2D& out) const;
    void inverse(const SpecField2D& f, Field2D& out) const;
    SpecField2D forward(const Field2D& f) const;
    Field2D inverse(const SpecField2D& f) const;

    // ------------------------------------------------------------------
    // Wavenumbers. kx index i runs over 0..nx/2 (r2c layout); ky index j is
    // signed via the usual wrap j > ny/2 -> j - ny.
    // ------------------------------------------------------------------
    double kx(int i) const { return kx_[i]; }
    double ky(int j) const { return ky_[j]; }

    // ------------------------------------------------------------------
    // Spectral-space operators (in place)
    // ------------------------------------------------------------------
    void deriv_x(SpecField2D& f) const;
    void deriv_y(SpecField2D& f) const;
    void laplacian(SpecField2D& f) const;
    /// Zero-mean inverse Laplacian: the k = 0 mode of the result is set to 0.
    void inv_laplacian(SpecField2D& f) const;
    /// 2/3-rule truncation: zero all modes with |kx index| > nx/3 or
    /// |ky index| > ny/3 (Nyquist modes are always zeroed).
    void dealias(SpecField2D& f) const;

    // ------------------------------------------------------------------
    // Field-level conveniences (forward -> op -> inverse)
    // ------------------------------------------------------------------
    Field2D dx(const Field2D& f) const;
    Field2D dy(const Field2D& f) const;
    Field2D laplacian(const Field2D& f) const;
    /// Solves lap(p) = f with mean(p) = 0; the mean of f is discarded.
    Field2D poisson(const Field2D& f) const;
    Field2D dealias(const Field2D& f) const;

    /// Divergence and scalar curl of a horizontal vector field.
    Field2D divergence(const VecField2D& u) const;
    Field2D curl(const VecField2D& u) const;

    /// Leray projection onto divergence-free fields; the k = 0 (mean) mode is
    /// left untouched. Operates in place.
    void project(VecField2D& u) const;

    double mean(const Field2D& f) const;

  private:
    Grid2D grid_;
    int nxk_;
    std::vector<double> kx_, ky_;
    std::vector<bool> keep_x_, keep_y_;  // 2/3 dealias masks per index
    void* plan_r2c_ = nullptr;           // fftw_plan, kept opaque here
    void* plan_c2r_ = nullptr;
    mutable std::vector<std::complex<double>> scratch_;
};

// ----------------------------------------------------------------------
// Norms on the periodic box (plain quadrature; the grid is uniform so the
// midpoint rule is spectrally accurate for smooth periodic fields).
// ----------------------------------------------------------------------
double l2_norm(const Field2D& f);
double l2_norm(const VecField2D& u);
double linf_norm(const VecField2D& u);

}  // namespace ekman
