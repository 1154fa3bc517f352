/// @file field2d.hpp
/// @brief Dense scalar/vector fields on the periodic grid, plus small helpers.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ekman/grid.hpp"

namespace ekman {

/// Real scalar field sampled on a Grid2D (row-major, y slow).
class Field2D {
  public:
    Field2D() = default;
    explicit Field2D(const Grid2D& g, double fill = 0.0) : grid_(g), v_(g.size(), fill) {}

    const Grid2D& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }

    double& operator()(int i, int j) { return v_[grid_.idx(i, j)]; }
    double operator()(int i, int j) const { return v_[grid_.idx(i, j)]; }
    double& operator[](std::size_t k) { return v_[k]; }
    double operator[](std::size_t k) const { return v_[k]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    Field2D& operator+=(const Field2D& o) {
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
        return *this;
    }
    Field2D& operator-=(const Field2D& o) {
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
        return *this;
    }
    Field2D& operator*=(double a) {
        for (double& x : v_) x *= a;
        return *this;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

  private:
    Grid2D grid_;
    std::vector<double> v_;
};

inline Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
inline Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
inline Field2D operator*(double s, Field2D a) { return a *= s; }

/// Pointwise product c = a*b.
inline Field2D hadamard(const Field2D& a, const Field2D& b) {
    Field2D c(a.grid());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] * b[k];
    return c;
}

/// Horizontal vector field (two components).
struct VecField2D {
    Field2D x, y;
    VecField2D() = default;
    explicit VecField2D(const Grid2D& g) : x(g), y(g) {}
    const Grid2D& grid() const { return x.grid(); }
};

/// Three-component field on the horizontal grid (used for plane slices of 3D data).
struct Field3 {
    Field2D x, y, z;
    Field3() = default;
    explicit Field3(const Grid2D& g) : x(g), y(g), z(g) {}
    const Grid2D& grid() const { return x.grid(); }
};

/// Spectral coefficients of a real field: dimensions (nx/2+1) x ny from the
/// real-to-complex transform; linear index = j*nxk + i with nxk = nx/2+1.
class SpecField2D {
  public:
    SpecField2D() = default;
    explicit SpecField2D(const Grid2D& g)
        : grid_(g), nxk_(g.nx / 2 + 1), v_(static_cast<std::size_t>(g.nx / 2 + 1) * g.ny) {}

    const Grid2D& grid() const { return grid_; }
    int nxk() const { return nxk_; }
    std::size_t size() const { return v_.size(); }

    std::complex<double>& operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * nxk_ + i]; }
    std::complex<double> operator()(int i, int j) const { return v_[static_cast<std::size_t>(j) * nxk_ + i]; }
    std::complex<double>& operator[](std::size_t k) { return v_[k]; }
    std::complex<double> operator[](std::size_t k) const { return v_[k]; }

    std::complex<double>* data() { return v_.data(); }
    const std::complex<double>* data() const { return v_.data(); }

  private:
    Grid2D grid_;
    int nxk_ = 0;
    std::vector<std::complex<double>> v_;
};

}  // namespace ekman
