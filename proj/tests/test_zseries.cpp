/// @file test_zseries.cpp
/// @brief Unit tests for the exp-polynomial layer algebra and the layer axis:
///        derivatives, convolutions, tail integrals, conjugation symmetry,
///        quadrature weights and the trapezoid dual route.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ekman/axis.hpp"
#include "ekman/zseries.hpp"

using namespace ekman;
using doctest::Approx;

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

ZSeries random_series(unsigned seed, int max_pow) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ZSeries g;
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k <= max_pow; ++k) g.coeff(b, k) = Cplx(u(rng), u(rng));
    return g;
}

double cdist(Cplx a, Cplx b) { return std::abs(a - b); }

}  // namespace

// ======================================================================
// ZSeries basics
// ======================================================================

TEST_CASE("basis shapes evaluate to the damped trig profiles") {
    const ZSeries m = ZSeries::decay_cos();
    const ZSeries s = ZSeries::decay_sin();
    for (double z : {0.0, 0.31, 1.7, 4.9, 11.0}) {
        const double env = std::exp(-z * kInvSqrt2);
        CHECK(m.real_value(z) == Approx(env * std::cos(z * kInvSqrt2)).epsilon(1e-14));
        CHECK(s.real_value(z) == Approx(env * std::sin(z * kInvSqrt2)).epsilon(1e-14));
        CHECK(m.value(z).imag() == Approx(0.0).epsilon(1e-15));
    }
    CHECK(m.is_real());
    CHECK(s.is_real());
    // exp(mu_b z) on each branch
    for (int b = 0; b < 2; ++b) {
        const ZSeries e = ZSeries::exponential(b);
        CHECK(cdist(e.value(2.2), std::exp(z_mu(b) * 2.2)) < 1e-15);
    }
}

TEST_CASE("derivative and multiplication by z act exactly") {
    ZSeries f;
    f.coeff(0, 2) = Cplx(0.7, -0.3);  // 0.7-0.3i * z^2 e^{mu_0 z}
    const Cplx mu = z_mu(0);
    for (double z : {0.4, 1.9, 6.3}) {
        const Cplx expect = (2.0 * z + mu * z * z) * Cplx(0.7, -0.3) * std::exp(mu * z);
        CHECK(cdist(f.dz().value(z), expect) < 1e-13);
        CHECK(cdist(f.times_z().value(z), z * f.value(z)) < 1e-14);
    }
    // the classic pair: (decay_cos)' = -(decay_cos + decay_sin)/sqrt2
    const ZSeries m = ZSeries::decay_cos();
    const ZSeries s = ZSeries::decay_sin();
    for (double z : {0.0, 0.9, 3.3}) {
        CHECK(m.dz().real_value(z) ==
              Approx(-kInvSqrt2 * (m.real_value(z) + s.real_value(z))).epsilon(1e-13));
        CHECK(s.dz().real_value(z) ==
              Approx(kInvSqrt2 * (m.real_value(z) - s.real_value(z))).epsilon(1e-13));
    }
}

TEST_CASE("degree cap overflows loudly instead of truncating") {
    ZSeries f;
    f.coeff(1, kZPow - 1) = 1.0;
    CHECK_THROWS_AS(f.times_z(), std::overflow_error);
    CHECK_THROWS_AS(f.conv(z_lambda_p()), std::overflow_error);  // resonant on branch 1
}

TEST_CASE("second-derivative identity of the spiral shapes") {
    // Both decaying trig shapes satisfy g'' = rotated pair: m'' = s, s'' = -m.
    const ZSeries m = ZSeries::decay_cos();
    const ZSeries s = ZSeries::decay_sin();
    for (double z : {0.2, 1.4, 5.5}) {
        CHECK(m.dz().dz().real_value(z) == Approx(s.real_value(z)).epsilon(1e-13));
        CHECK(s.dz().dz().real_value(z) == Approx(-m.real_value(z)).epsilon(1e-13));
    }
}

// ======================================================================
// Convolution
// ======================================================================

TEST_CASE("convolution vanishes at the wall and obeys its own ODE") {
    const ZSeries g = random_series(11, 2);
    for (Cplx lam : {z_lambda_p(), z_lambda_m()}) {
        const ZSeries c = g.conv(lam);
        CHECK(std::abs(c.value(0.0)) < 1e-14);
        // d/dz conv = g - lambda conv
        const ZSeries dc = c.dz();
        for (double z : {0.3, 1.1, 2.8, 7.5}) {
            const Cplx expect = g.value(z) - lam * c.value(z);
            CHECK(cdist(dc.value(z), expect) < 1e-12 * (1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("convolution spot values match the independent quadrature oracle") {
    // Frozen from 30-digit adaptive quadrature of the defining integral.
    const double z = 1.3;
    ZSeries t_mu1;  // t e^{mu_0 t}
    t_mu1.coeff(0, 1) = 1.0;
    CHECK(cdist(t_mu1.conv(z_lambda_p()).value(z),
                Cplx(0.29150885165369983972, 0.094796246869687169936)) < 1e-15);

    ZSeries t_mu2;  // t e^{mu_1 t}: resonant with lambda_p
    t_mu2.coeff(1, 1) = 1.0;
    CHECK(cdist(t_mu2.conv(z_lambda_p()).value(z),
                Cplx(0.20436846196333306541, -0.26796625151430481752)) < 1e-15);

    ZSeries e_mu1 = ZSeries::exponential(0);  // resonant with lambda_m
    CHECK(cdist(e_mu1.conv(z_lambda_m()).value(z),
                Cplx(0.31441301840512779295, 0.41225577156046895004)) < 1e-15);

    ZSeries t2_mu2;  // t^2 e^{mu_1 t}
    t2_mu2.coeff(1, 2) = 1.0;
    CHECK(cdist(t2_mu2.conv(z_lambda_m()).value(z),
                Cplx(0.24489936916463013886, -0.12323512093059332092)) < 1e-15);
}

TEST_CASE("convolution rejects kernels outside the algebra") {
    const ZSeries g = ZSeries::decay_cos();
    CHECK_THROWS_AS(g.conv(Cplx(-1.0, 0.0)), std::invalid_argument);  // growing kernel
    CHECK_THROWS_AS(g.conv(Cplx(1.0, 0.0)), std::invalid_argument);   // not representable
}

// ======================================================================
// Tail integrals
// ======================================================================

TEST_CASE("tail integral differentiates back to minus the integrand") {
    const ZSeries g = random_series(23, 3);
    const ZSeries t = g.tail();
    for (double z : {0.0, 0.6, 2.1, 9.0}) {
        CHECK(cdist(t.dz().value(z), -g.value(z)) < 1e-11 * (1.0 + std::abs(g.value(z))));
    }
}

TEST_CASE("tail spot value matches the independent quadrature oracle") {
    ZSeries t2_mu1;  // t^2 e^{mu_0 t}
    t2_mu1.coeff(0, 2) = 1.0;
    CHECK(cdist(t2_mu1.tail().value(0.8), Cplx(-1.5164954363166012634, 1.3695291931878722437)) <
          1e-14);
}

// ======================================================================
// Conjugation and real parts
// ======================================================================

TEST_CASE("conjugation swaps branches and real_part projects") {
    const ZSeries g = random_series(5, 3);
    for (double z : {0.5, 2.7}) {
        CHECK(cdist(g.conjugated().value(z), std::conj(g.value(z))) < 1e-13);
        CHECK(g.real_part().value(z).real() == Approx(g.value(z).real()).epsilon(1e-13));
        CHECK(std::abs(g.real_part().value(z).imag()) < 1e-13);
    }
    CHECK(g.real_part().is_real());
    CHECK_FALSE(g.is_real());
    // real_part is idempotent
    const ZSeries r = g.real_part();
    for (double z : {0.5, 2.7})
        CHECK(cdist(r.real_part().value(z), r.value(z)) < 1e-14);
}

// ======================================================================
// StretchedAxis
// ======================================================================

TEST_CASE("axis defaults and node layout") {
    StretchedAxis ax;
    CHECK(ax.size() == 256);
    CHECK(ax.z_max() == Approx(45.0));
    CHECK(ax.tail_tol() == Approx(1e-8));
    CHECK(ax.node(0) == Approx(0.0));
    CHECK(ax.node(ax.size() - 1) == Approx(45.0));
    for (int q = 1; q < ax.size(); ++q) CHECK(ax.node(q) > ax.node(q - 1));
    // clustered at both ends: first gap much smaller than the central one
    const double first = ax.node(1) - ax.node(0);
    const double mid = ax.node(128) - ax.node(127);
    CHECK(first < 0.05 * mid);
}

TEST_CASE("axis construction rejects inconsistent parameters") {
    CHECK_THROWS_AS(StretchedAxis(3), std::invalid_argument);
    CHECK_THROWS_AS(StretchedAxis(64, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(StretchedAxis(64, 45.0, 0.0), std::invalid_argument);
    // truncating at 25 leaves a tail above the default tolerance
    CHECK_THROWS_WITH_AS(StretchedAxis(256, 25.0, 1e-8),
                         doctest::Contains("z_max"), std::invalid_argument);
}

TEST_CASE("quadrature weights integrate polynomials exactly") {
    StretchedAxis ax;
    std::vector<double> one(ax.size(), 1.0), lin(ax.size()), quad(ax.size()), quint(ax.size());
    for (int q = 0; q < ax.size(); ++q) {
        const double z = ax.node(q);
        lin[q] = z;
        quad[q] = z * z;
        quint[q] = z * z * z * z * z;
    }
    const double Z = ax.z_max();
    CHECK(ax.integrate(one) == Approx(Z).epsilon(1e-13));
    CHECK(ax.integrate(lin) == Approx(Z * Z / 2.0).epsilon(1e-13));
    CHECK(ax.integrate(quad) == Approx(Z * Z * Z / 3.0).epsilon(1e-13));
    CHECK(ax.integrate(quint) == Approx(std::pow(Z, 6.0) / 6.0).epsilon(1e-13));
}

TEST_CASE("quadrature reproduces the frozen damped-trig integrals") {
    StretchedAxis ax;
    std::vector<double> fc(ax.size()), fs(ax.size());
    for (int q = 0; q < ax.size(); ++q) {
        const double z = ax.node(q);
        fc[q] = std::exp(-z * kInvSqrt2) * std::cos(z * kInvSqrt2);
        fs[q] = std::exp(-z * kInvSqrt2) * std::sin(z * kInvSqrt2);
    }
    // Frozen from the closed antiderivatives truncated at z_max = 45
    // (30-digit evaluation).
    CHECK(std::abs(ax.integrate(fc) - 0.7071067811865418781051) < 1e-10);
    CHECK(std::abs(ax.integrate(fs) - 0.7071067811865334500314) < 1e-10);
}

TEST_CASE("trapezoid prefix/suffix rules are exact for linear data") {
    StretchedAxis ax(96, 45.0, 1e-8);
    std::vector<double> f(ax.size());
    for (int q = 0; q < ax.size(); ++q) f[q] = 2.0 * ax.node(q);
    const auto cum = ax.cumulative_trapezoid(f);
    const auto suf = ax.tail_trapezoid(f);
    CHECK(cum.front() == Approx(0.0));
    CHECK(suf.back() == Approx(0.0));
    for (int q = 0; q < ax.size(); ++q) {
        const double z = ax.node(q);
        CHECK(cum[q] == Approx(z * z).epsilon(1e-12));
        CHECK(suf[q] == Approx(45.0 * 45.0 - z * z).epsilon(1e-12));
    }
    std::vector<double> wrong(7, 0.0);
    CHECK_THROWS_AS(ax.cumulative_trapezoid(wrong), std::invalid_argument);
}

TEST_CASE("axis quadrature agrees with the exact tail at the wall") {
    StretchedAxis ax;
    const ZSeries g = random_series(31, 2).real_part();
    std::vector<double> f(ax.size());
    for (int q = 0; q < ax.size(); ++q) f[q] = g.real_value(ax.node(q));
    CHECK(ax.integrate(f) == Approx(g.tail().real_value(0.0)).epsilon(1e-9));
}

// ======================================================================
// Dual route: trapezoid on the axis vs the exact algebra
// ======================================================================

TEST_CASE("trapezoid convolution route tracks the exact one") {
    StretchedAxis ax;
    const ZSeries g = random_series(47, 1);
    for (Cplx lam : {z_lambda_p(), z_lambda_m()}) {
        const ZSeries exact = g.conv(lam);
        // conv(z_q) = e^{-lam z_q} * cumtrapz(e^{lam tau} g(tau))_q
        std::vector<Cplx> h(ax.size());
        for (int q = 0; q < ax.size(); ++q)
            h[q] = std::exp(lam * ax.node(q)) * g.value(ax.node(q));
        const auto cum = ax.cumulative_trapezoid(h);
        double scale = 0.0;
        for (int q = 0; q < ax.size(); ++q)
            scale = std::max(scale, std::abs(exact.value(ax.node(q))));
        double err = 0.0;
        for (int q = 0; q < ax.size(); ++q) {
            const Cplx approx = std::exp(-lam * ax.node(q)) * cum[q];
            err = std::max(err, std::abs(approx - exact.value(ax.node(q))));
        }
        CHECK(err < 5e-3 * scale);
        CHECK(err > 0.0);  // genuinely independent routes
    }
}

TEST_CASE("trapezoid tail route tracks the exact one") {
    StretchedAxis ax;
    const ZSeries g = random_series(53, 2);
    const ZSeries exact = g.tail();
    std::vector<Cplx> f(ax.size());
    for (int q = 0; q < ax.size(); ++q) f[q] = g.value(ax.node(q));
    const auto suf = ax.tail_trapezoid(f);
    double scale = std::abs(exact.value(0.0));
    double err = 0.0;
    for (int q = 0; q < ax.size(); ++q)
        err = std::max(err, std::abs(suf[q] - exact.value(ax.node(q))));
    CHECK(err < 5e-3 * scale);
}

// ======================================================================
// SeriesPlane
// ======================================================================

TEST_CASE("series planes combine coefficient fields with vertical shapes") {
    Grid2D g(16, 16, 2.0 * M_PI, 2.0 * M_PI);
    Field2D cx(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) cx(i, j) = std::cos(g.x(i)) * std::sin(g.y(j));

    SeriesPlane p(g);
    p.add_scaled(cx, ZSeries::decay_cos());
    const double z = 1.7;
    const Field2D v = p.real_at(z);
    const double shape = std::exp(-z * kInvSqrt2) * std::cos(z * kInvSqrt2);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(v(i, j) == Approx(cx(i, j) * shape).epsilon(1e-13));

    // complex coefficient plane + real_part round trip
    std::vector<Cplx> cc(g.size(), Cplx(0.0, 1.0));
    SeriesPlane q(g);
    q.add_scaled(cc, ZSeries::exponential(0));
    const SeriesPlane qr = q.real_part();
    for (std::size_t k = 0; k < q.size(); ++k) {
        CHECK(qr.at(k).is_real());
        CHECK(qr.at(k).value(0.9).real() == Approx(q.at(k).value(0.9).real()).epsilon(1e-13));
    }
}

TEST_CASE("series-plane spectral derivatives differentiate the coefficients") {
    Grid2D g(32, 32, 2.0 * M_PI, 2.0 * M_PI);
    SpectralWorkspace ws(g);
    Field2D cx(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) cx(i, j) = std::sin(2.0 * g.x(i)) * std::cos(g.y(j));

    SeriesPlane p(g);
    p.add_scaled(cx, ZSeries::decay_sin());
    const SeriesPlane px = deriv_x(ws, p);
    const SeriesPlane py = deriv_y(ws, p);
    const double z = 0.8;
    const double shape = std::exp(-z * kInvSqrt2) * std::sin(z * kInvSqrt2);
    const Field2D vx = px.real_at(z), vy = py.real_at(z);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double ex = 2.0 * std::cos(2.0 * g.x(i)) * std::cos(g.y(j)) * shape;
            const double ey = -std::sin(2.0 * g.x(i)) * std::sin(g.y(j)) * shape;
            CHECK(vx(i, j) == Approx(ex).epsilon(1e-11).scale(1.0));
            CHECK(vy(i, j) == Approx(ey).epsilon(1e-11).scale(1.0));
        }
    }
}

TEST_CASE("plane-wide conv and tail are the pointwise operations") {
    Grid2D g(8, 8, 1.0, 1.0);
    SeriesPlane p(g);
    for (std::size_t k = 0; k < p.size(); ++k) p.at(k) = random_series(100 + unsigned(k), 2);
    const SeriesPlane c = p.conv(z_lambda_p());
    const SeriesPlane t = p.tail();
    for (std::size_t k = 0; k < p.size(); ++k) {
        CHECK(cdist(c.at(k).value(1.1), p.at(k).conv(z_lambda_p()).value(1.1)) < 1e-14);
        CHECK(cdist(t.at(k).value(0.4), p.at(k).tail().value(0.4)) < 1e-14);
    }
}
