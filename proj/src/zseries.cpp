/// @file zseries.cpp
/// @brief Implementation of the exp-polynomial layer algebra.

#include "ekman/zseries.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ekman {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

// Matching tolerance for identifying resonant exponents; all exponents in
// play are O(1) and exact-cancelling in floating point, so this is generous.
constexpr double kExpMatchTol = 1e-9;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

Cplx z_mu(int branch) {
    if (branch != 0 && branch != 1)
        throw std::invalid_argument("z_mu: branch must be 0 or 1, got " + std::to_string(branch));
    return {-kInvSqrt2, branch == 0 ? kInvSqrt2 : -kInvSqrt2};
}

Cplx z_lambda_p() { return {kInvSqrt2, kInvSqrt2}; }
Cplx z_lambda_m() { return {kInvSqrt2, -kInvSqrt2}; }

// ======================================================================
// ZSeries
// ======================================================================

ZSeries ZSeries::exponential(int branch) {
    ZSeries g;
    g.coeff(branch, 0) = 1.0;
    return g;
}

ZSeries ZSeries::decay_cos() {
    ZSeries g;
    g.coeff(0, 0) = 0.5;
    g.coeff(1, 0) = 0.5;
    return g;
}

ZSeries ZSeries::decay_sin() {
    ZSeries g;
    g.coeff(0, 0) = Cplx(0.0, -0.5);  // 1/(2i)
    g.coeff(1, 0) = Cplx(0.0, 0.5);
    return g;
}

Cplx ZSeries::value(double z) const {
    Cplx out = 0.0;
    for (int b = 0; b < 2; ++b) {
        Cplx poly = 0.0;
        for (int k = kZPow - 1; k >= 0; --k) poly = poly * z + c_[b][k];
        out += poly * std::exp(z_mu(b) * z);
    }
    return out;
}

double ZSeries::real_value(double z) const { return value(z).real(); }

double ZSeries::max_abs_coeff() const {
    double m = 0.0;
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k < kZPow; ++k) m = std::max(m, std::abs(c_[b][k]));
    return m;
}

int ZSeries::degree() const {
    int d = 0;
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k < kZPow; ++k)
            if (std::abs(c_[b][k]) != 0.0) d = std::max(d, k);
    return d;
}

ZSeries ZSeries::dz() const {
    ZSeries out;
    for (int b = 0; b < 2; ++b) {
        const Cplx mu = z_mu(b);
        for (int k = 0; k < kZPow; ++k) {
            Cplx v = mu * c_[b][k];
            if (k + 1 < kZPow) v += double(k + 1) * c_[b][k + 1];
            out.c_[b][k] = v;
        }
    }
    return out;
}

ZSeries ZSeries::times_z() const {
    ZSeries out;
    for (int b = 0; b < 2; ++b) {
        if (std::abs(c_[b][kZPow - 1]) != 0.0)
            throw std::overflow_error("ZSeries::times_z: polynomial degree cap " +
                                      std::to_string(kZPow - 1) + " exceeded");
        for (int k = 0; k + 1 < kZPow; ++k) out.c_[b][k + 1] = c_[b][k];
    }
    return out;
}

ZSeries ZSeries::conv(Cplx lambda) const {
    if (lambda.real() <= 0.0)
        throw std::invalid_argument("ZSeries::conv: kernel exponent must have positive real part");
    // The non-resonant remainder exp(-lambda z) must live on one of the two
    // branches for the algebra to stay closed.
    int hom_branch = -1;
    for (int b = 0; b < 2; ++b)
        if (std::abs(-lambda - z_mu(b)) < kExpMatchTol) hom_branch = b;
    if (hom_branch < 0)
        throw std::invalid_argument("ZSeries::conv: exp(-lambda z) is not representable here");

    ZSeries out;
    for (int b = 0; b < 2; ++b) {
        const Cplx mu = z_mu(b);
        const Cplx a = lambda + mu;
        for (int k = 0; k < kZPow; ++k) {
            const Cplx ck = c_[b][k];
            if (std::abs(ck) == 0.0) continue;
            if (std::abs(a) < kExpMatchTol) {
                // Resonant: int_0^z tau^k exp(mu tau - lambda(z - tau) - mu z) picks
                // up z^(k+1)/(k+1) on the same branch.
                if (k + 1 >= kZPow)
                    throw std::overflow_error("ZSeries::conv: resonant degree cap exceeded");
                out.c_[b][k + 1] += ck / double(k + 1);
            } else {
                // int_0^z e^(a tau) tau^k dtau in closed form, then * exp(-lambda z).
                Cplx apow = a;  // a^(k - m + 1) running from m = k down to 0
                double sign = 1.0;
                const double kfac = factorial(k);
                for (int m = k; m >= 0; --m) {
                    out.c_[b][m] += ck * sign * (kfac / factorial(m)) / apow;
                    if (m > 0) apow *= a;
                    sign = -sign;
                }
                // boundary term at tau = 0 rides exp(-lambda z); apow == a^(k+1)
                const double sgn_k = (k % 2 == 0) ? 1.0 : -1.0;
                out.c_[hom_branch][0] -= ck * sgn_k * kfac / apow;
            }
        }
    }
    return out;
}

ZSeries ZSeries::tail() const {
    ZSeries out;
    for (int b = 0; b < 2; ++b) {
        const Cplx mu = z_mu(b);
        for (int k = 0; k < kZPow; ++k) {
            const Cplx ck = c_[b][k];
            if (std::abs(ck) == 0.0) continue;
            Cplx mupow = mu;  // mu^(k - m + 1)
            double sign = 1.0;
            const double kfac = factorial(k);
            for (int m = k; m >= 0; --m) {
                out.c_[b][m] -= ck * sign * (kfac / factorial(m)) / mupow;
                mupow *= mu;
                sign = -sign;
            }
        }
    }
    return out;
}

ZSeries ZSeries::conjugated() const {
    ZSeries out;
    for (int k = 0; k < kZPow; ++k) {
        out.c_[0][k] = std::conj(c_[1][k]);
        out.c_[1][k] = std::conj(c_[0][k]);
    }
    return out;
}

ZSeries ZSeries::real_part() const {
    ZSeries out;
    for (int k = 0; k < kZPow; ++k) {
        out.c_[0][k] = 0.5 * (c_[0][k] + std::conj(c_[1][k]));
        out.c_[1][k] = std::conj(out.c_[0][k]);
    }
    return out;
}

bool ZSeries::is_real(double tol) const {
    const double scale = std::max(1.0, max_abs_coeff());
    for (int k = 0; k < kZPow; ++k)
        if (std::abs(c_[1][k] - std::conj(c_[0][k])) > tol * scale) return false;
    return true;
}

ZSeries& ZSeries::operator+=(const ZSeries& o) {
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k < kZPow; ++k) c_[b][k] += o.c_[b][k];
    return *this;
}

ZSeries& ZSeries::operator-=(const ZSeries& o) {
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k < kZPow; ++k) c_[b][k] -= o.c_[b][k];
    return *this;
}

ZSeries& ZSeries::operator*=(Cplx a) {
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k < kZPow; ++k) c_[b][k] *= a;
    return *this;
}

// ======================================================================
// SeriesPlane
// ======================================================================

namespace {

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* who) {
    if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace

SeriesPlane& SeriesPlane::add_scaled(const Field2D& a, const ZSeries& base) {
    require_same_grid(grid_, a.grid(), "SeriesPlane::add_scaled");
    for (std::size_t k = 0; k < s_.size(); ++k) {
        ZSeries t = base;
        t *= Cplx(a[k], 0.0);
        s_[k] += t;
    }
    return *this;
}

SeriesPlane& SeriesPlane::add_scaled(const std::vector<Cplx>& a, const ZSeries& base) {
    if (a.size() != s_.size())
        throw std::invalid_argument("SeriesPlane::add_scaled: coefficient plane size mismatch");
    for (std::size_t k = 0; k < s_.size(); ++k) {
        ZSeries t = base;
        t *= a[k];
        s_[k] += t;
    }
    return *this;
}

SeriesPlane& SeriesPlane::add_scaled(const Field2D& a, const SeriesPlane& o) {
    require_same_grid(grid_, a.grid(), "SeriesPlane::add_scaled");
    require_same_grid(grid_, o.grid_, "SeriesPlane::add_scaled");
    for (std::size_t k = 0; k < s_.size(); ++k) {
        ZSeries t = o.s_[k];
        t *= Cplx(a[k], 0.0);
        s_[k] += t;
    }
    return *this;
}

SeriesPlane& SeriesPlane::add_scaled(const std::vector<Cplx>& a, const SeriesPlane& o) {
    if (a.size() != s_.size())
        throw std::invalid_argument("SeriesPlane::add_scaled: coefficient plane size mismatch");
    require_same_grid(grid_, o.grid_, "SeriesPlane::add_scaled");
    for (std::size_t k = 0; k < s_.size(); ++k) {
        ZSeries t = o.s_[k];
        t *= a[k];
        s_[k] += t;
    }
    return *this;
}

SeriesPlane& SeriesPlane::add_scaled(Cplx a, const SeriesPlane& o) {
    require_same_grid(grid_, o.grid_, "SeriesPlane::add_scaled");
    for (std::size_t k = 0; k < s_.size(); ++k) {
        ZSeries t = o.s_[k];
        t *= a;
        s_[k] += t;
    }
    return *this;
}

SeriesPlane& SeriesPlane::operator+=(const SeriesPlane& o) {
    require_same_grid(grid_, o.grid_, "SeriesPlane::operator+=");
    for (std::size_t k = 0; k < s_.size(); ++k) s_[k] += o.s_[k];
    return *this;
}

SeriesPlane& SeriesPlane::operator-=(const SeriesPlane& o) {
    require_same_grid(grid_, o.grid_, "SeriesPlane::operator-=");
    for (std::size_t k = 0; k < s_.size(); ++k) s_[k] -= o.s_[k];
    return *this;
}

SeriesPlane SeriesPlane::dz() const {
    SeriesPlane out(grid_);
    for (std::size_t k = 0; k < s_.size(); ++k) out.s_[k] = s_[k].dz();
    return out;
}

SeriesPlane SeriesPlane::times_z() const {
    SeriesPlane out(grid_);
    for (std::size_t k = 0; k < s_.size(); ++k) out.s_[k] = s_[k].times_z();
    return out;
}

SeriesPlane SeriesPlane::conv(Cplx lambda) const {
    SeriesPlane out(grid_);
    for (std::size_t k = 0; k < s_.size(); ++k) out.s_[k] = s_[k].conv(lambda);
    return out;
}

SeriesPlane SeriesPlane::tail() const {
    SeriesPlane out(grid_);
    for (std::size_t k = 0; k < s_.size(); ++k) out.s_[k] = s_[k].tail();
    return out;
}

SeriesPlane SeriesPlane::real_part() const {
    SeriesPlane out(grid_);
    for (std::size_t k = 0; k < s_.size(); ++k) out.s_[k] = s_[k].real_part();
    return out;
}

Field2D SeriesPlane::real_at(double z) const {
    Field2D out(grid_);
    for (std::size_t k = 0; k < s_.size(); ++k) out[k] = s_[k].real_value(z);
    return out;
}

double SeriesPlane::max_abs_coeff() const {
    double m = 0.0;
    for (const ZSeries& g : s_) m = std::max(m, g.max_abs_coeff());
    return m;
}

// ======================================================================
// Horizontal spectral derivatives of coefficient planes
// ======================================================================

namespace {

SeriesPlane deriv_h(const SpectralWorkspace& sp, const SeriesPlane& f, bool along_x) {
    SeriesPlane out(f.grid());
    const std::size_t n = f.size();
    Field2D re(f.grid()), im(f.grid());
    for (int b = 0; b < 2; ++b) {
        for (int kp = 0; kp < kZPow; ++kp) {
            double amax = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                amax = std::max(amax, std::abs(f.at(k).coeff(b, kp)));
            if (amax == 0.0) continue;  // untouched coefficient plane
            for (std::size_t k = 0; k < n; ++k) {
                const Cplx c = f.at(k).coeff(b, kp);
                re[k] = c.real();
                im[k] = c.imag();
            }
            const Field2D dre = along_x ? sp.dx(re) : sp.dy(re);
            const Field2D dim = along_x ? sp.dx(im) : sp.dy(im);
            for (std::size_t k = 0; k < n; ++k) out.at(k).coeff(b, kp) = Cplx(dre[k], dim[k]);
        }
    }
    return out;
}

}  // namespace

SeriesPlane deriv_x(const SpectralWorkspace& sp, const SeriesPlane& f) {
    return deriv_h(sp, f, true);
}

SeriesPlane deriv_y(const SpectralWorkspace& sp, const SeriesPlane& f) {
    return deriv_h(sp, f, false);
}

}  // namespace ekman
