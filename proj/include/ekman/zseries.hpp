/// @file zseries.hpp
/// @brief Exp-polynomial functions of the stretched layer coordinate: the
///        closed algebra spanned by z^k * exp(mu z) with mu = (-1 ± i)/sqrt(2),
///        and planes of such series over the horizontal grid.

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ekman/field2d.hpp"
#include "ekman/grid.hpp"
#include "ekman/spectral.hpp"

namespace ekman {

using Cplx = std::complex<double>;

/// Polynomial degrees retained per exponential branch. Every profile built
/// here has degree <= 3; the headroom lets intermediate products overflow
/// loudly instead of silently truncating.
inline constexpr int kZPow = 6;

/// The two decaying exponents: mu_0 = (-1+i)/sqrt2, mu_1 = (-1-i)/sqrt2.
/// They are complex conjugates, so conjugation swaps branches and the algebra
/// is closed under taking real parts.
Cplx z_mu(int branch);

/// Decaying convolution kernels exp(-lambda z) with positive real part:
/// lambda_p = sqrt(i) = (1+i)/sqrt2, lambda_m = sqrt(-i) = (1-i)/sqrt2.
/// Note -lambda_p == mu_1 and -lambda_m == mu_0.
Cplx z_lambda_p();
Cplx z_lambda_m();

/// One function of the layer coordinate:
///   g(z) = sum_{b=0,1} sum_{k<kZPow} c[b][k] * z^k * exp(mu_b z).
/// Closed under d/dz, multiplication by z, the one-sided convolutions
/// appearing in the order-1 profiles, and tail integrals over [z, inf).
class ZSeries {
  public:
    ZSeries() = default;  // identically zero

    /// exp(mu_b z) on the requested branch.
    static ZSeries exponential(int branch);
    /// e^(-z/sqrt2) cos(z/sqrt2) = (exp(mu_0 z) + exp(mu_1 z)) / 2.
    static ZSeries decay_cos();
    /// e^(-z/sqrt2) sin(z/sqrt2) = (exp(mu_0 z) - exp(mu_1 z)) / (2i).
    static ZSeries decay_sin();

    Cplx coeff(int branch, int pow) const { return c_[branch][pow]; }
    Cplx& coeff(int branch, int pow) { return c_[branch][pow]; }

    Cplx value(double z) const;
    double real_value(double z) const;

    /// Largest coefficient magnitude; zero series iff this is 0.
    double max_abs_coeff() const;
    /// Highest power with a nonzero coefficient (0 for the zero series).
    int degree() const;

    ZSeries dz() const;
    ZSeries times_z() const;  // throws std::overflow_error at the degree cap

    /// One-sided convolution int_0^z exp(-lambda (z - tau)) g(tau) dtau.
    /// Requires Re(lambda) > 0 so the result decays; resonant branches
    /// (-lambda == mu_b) raise the polynomial degree by one.
    ZSeries conv(Cplx lambda) const;

    /// Tail integral int_z^inf g(tau) dtau (finite since Re mu < 0).
    ZSeries tail() const;

    ZSeries conjugated() const;
    /// (g + conj g) / 2 as a member of the same algebra.
    ZSeries real_part() const;
    /// True when the series represents a real-valued function.
    bool is_real(double tol = 1e-12) const;

    ZSeries& operator+=(const ZSeries& o);
    ZSeries& operator-=(const ZSeries& o);
    ZSeries& operator*=(Cplx a);

    friend ZSeries operator+(ZSeries a, const ZSeries& b) { return a += b; }
    friend ZSeries operator-(ZSeries a, const ZSeries& b) { return a -= b; }
    friend ZSeries operator*(Cplx a, ZSeries g) { return g *= a; }
    friend ZSeries operator*(ZSeries g, Cplx a) { return g *= a; }

  private:
    std::array<std::array<Cplx, kZPow>, 2> c_{};  // [branch][power]
};

/// A field of ZSeries over the horizontal grid: the natural container for a
/// boundary-layer amplitude U(x, y, z_stretched). Same row-major layout as
/// Field2D.
class SeriesPlane {
  public:
    SeriesPlane() = default;
    explicit SeriesPlane(const Grid2D& g) : grid_(g), s_(g.size()) {}

    const Grid2D& grid() const { return grid_; }
    std::size_t size() const { return s_.size(); }
    ZSeries& at(std::size_t k) { return s_[k]; }
    const ZSeries& at(std::size_t k) const { return s_[k]; }

    // ------------------------------------------------------------------
    // Pointwise assembly: out += coefficient-plane * series
    // ------------------------------------------------------------------
    SeriesPlane& add_scaled(const Field2D& a, const ZSeries& base);
    SeriesPlane& add_scaled(const std::vector<Cplx>& a, const ZSeries& base);
    SeriesPlane& add_scaled(const Field2D& a, const SeriesPlane& o);
    SeriesPlane& add_scaled(const std::vector<Cplx>& a, const SeriesPlane& o);
    SeriesPlane& add_scaled(Cplx a, const SeriesPlane& o);
    SeriesPlane& operator+=(const SeriesPlane& o);
    SeriesPlane& operator-=(const SeriesPlane& o);

    // ------------------------------------------------------------------
    // Vertical-structure operators, applied point by point
    // ------------------------------------------------------------------
    SeriesPlane dz() const;
    SeriesPlane times_z() const;
    SeriesPlane conv(Cplx lambda) const;
    SeriesPlane tail() const;
    SeriesPlane real_part() const;

    /// Plane of real function values at a fixed layer coordinate.
    Field2D real_at(double z) const;
    /// Largest coefficient magnitude over the whole plane.
    double max_abs_coeff() const;

  private:
    Grid2D grid_;
    std::vector<ZSeries> s_;
};

/// Horizontal spectral derivatives, taken coefficient plane by coefficient
/// plane (each c[b][k](x, y) is smooth and periodic).
SeriesPlane deriv_x(const SpectralWorkspace& sp, const SeriesPlane& f);
SeriesPlane deriv_y(const SpectralWorkspace& sp, const SeriesPlane& f);

}  // namespace ekman
