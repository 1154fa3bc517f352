/// @file profiles.cpp
/// @brief Construction of the wall-layer and interior correction profiles.

#include "ekman/profiles.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ekman {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

// ----------------------------------------------------------------------
// Pointwise field scratch helpers
// ----------------------------------------------------------------------

Field2D pw_mul(const Field2D& a, const Field2D& b) {
    Field2D out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= b[k];
    return out;
}

Field2D pw_scaled(const Field2D& a, double c) {
    Field2D out = a;
    out *= c;
    return out;
}

Field2D pw_sum(const Field2D& a, const Field2D& b) {
    Field2D out = a;
    out += b;
    return out;
}

// ----------------------------------------------------------------------
// Geometry coefficient planes shared by the builders
// ----------------------------------------------------------------------

struct GeoPlanes {
    Field2D bx, by;         // surface gradient
    // A = cos(gamma) E1 H0: the layer coupling matrix, A^2 = -I.
    Field2D a11, a12, a21, a22;
    Field2D hb1, hb2;       // Hessian * grad B
    Field2D qb;             // grad B^T * Hessian * grad B
    Field2D lap_b;          // Bxx + Byy
    Field2D cg, cg2, cg3;   // cos(gamma) powers
    Field2D inv_cg;
    Field2D sqrt_cg_nu;     // sqrt(cos(gamma) / nu)
    Field2D cg32_inv_sqnu;  // cos(gamma)^{3/2} / sqrt(nu)
};

GeoPlanes make_geo_planes(const GeometryBundle& geo) {
    if (geo.bxx.size() != geo.grid.size() || geo.bxy.size() != geo.grid.size() ||
        geo.byy.size() != geo.grid.size())
        throw std::runtime_error(
            "profiles: geometry bundle lacks the second-derivative planes of the surface");
    const Grid2D& g = geo.grid;
    GeoPlanes p;
    p.bx = geo.bx;
    p.by = geo.by;
    for (Field2D* f : {&p.a11, &p.a12, &p.a21, &p.a22, &p.hb1, &p.hb2, &p.qb, &p.lap_b, &p.cg,
                       &p.cg2, &p.cg3, &p.inv_cg, &p.sqrt_cg_nu, &p.cg32_inv_sqnu})
        *f = Field2D(g);
    const double inv_sqrt_nu = 1.0 / std::sqrt(geo.nu);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double bx = geo.bx[k], by = geo.by[k];
        const double cg = geo.cos_gamma[k];
        p.a11[k] = cg * bx * by;
        p.a12[k] = cg * (1.0 + by * by);
        p.a21[k] = -cg * (1.0 + bx * bx);
        p.a22[k] = -cg * bx * by;
        p.hb1[k] = geo.bxx[k] * bx + geo.bxy[k] * by;
        p.hb2[k] = geo.bxy[k] * bx + geo.byy[k] * by;
        p.qb[k] = bx * p.hb1[k] + by * p.hb2[k];
        p.lap_b[k] = geo.bxx[k] + geo.byy[k];
        p.cg[k] = cg;
        p.cg2[k] = cg * cg;
        p.cg3[k] = cg * cg * cg;
        p.inv_cg[k] = 1.0 / cg;
        p.sqrt_cg_nu[k] = std::sqrt(cg / geo.nu);
        p.cg32_inv_sqnu[k] = cg * std::sqrt(cg) * inv_sqrt_nu;
    }
    return p;
}

/// Complex coefficient planes of the eigen-pack: Q entries and W = Q^-1 H0^-1.
struct DiagPlanes {
    std::vector<Cplx> q11, q12, q21, q22;
    std::vector<Cplx> w11, w12, w21, w22;
};

DiagPlanes make_diag_planes(const GeometryBundle& geo) {
    const std::size_t n = geo.grid.size();
    DiagPlanes d;
    for (std::vector<Cplx>* v : {&d.q11, &d.q12, &d.q21, &d.q22, &d.w11, &d.w12, &d.w21, &d.w22})
        v->assign(n, Cplx{});
    for (int j = 0; j < geo.grid.ny; ++j) {
        for (int i = 0; i < geo.grid.nx; ++i) {
            const std::size_t k = geo.grid.idx(i, j);
            const PointGeometry pg = geo.point(i, j);
            const DiagPoint dp = diag_closed_form(pg);
            const Eigen::Matrix2cd w = dp.q_inv * pg.h0_inv().cast<Cplx>();
            d.q11[k] = dp.q(0, 0);
            d.q12[k] = dp.q(0, 1);
            d.q21[k] = dp.q(1, 0);
            d.q22[k] = dp.q(1, 1);
            d.w11[k] = w(0, 0);
            d.w12[k] = w(0, 1);
            d.w21[k] = w(1, 0);
            d.w22[k] = w(1, 1);
        }
    }
    return d;
}

// ----------------------------------------------------------------------
// Shared sub-assemblies
// ----------------------------------------------------------------------

/// out_h += -(cos * I + sin * A) v: the damped-spiral response that cancels
/// an interior horizontal field v at the wall.
void add_spiral_response(SeriesPlane& out1, SeriesPlane& out2, const GeoPlanes& gp,
                         const VecField2D& v) {
    const ZSeries m = ZSeries::decay_cos();
    const ZSeries s = ZSeries::decay_sin();
    Field2D av1 = pw_mul(gp.a11, v.x);
    av1 += pw_mul(gp.a12, v.y);
    Field2D av2 = pw_mul(gp.a21, v.x);
    av2 += pw_mul(gp.a22, v.y);
    out1.add_scaled(pw_scaled(v.x, -1.0), m);
    out1.add_scaled(pw_scaled(av1, -1.0), s);
    out2.add_scaled(pw_scaled(v.y, -1.0), m);
    out2.add_scaled(pw_scaled(av2, -1.0), s);
}

/// The scalar wall operator
///   3 cos^2 qb (d/dz + z d^2/dz^2) - (lap B + 2 grad B . grad_h) d/dz
/// applied to one layer amplitude. Shows up (with different prefactors and
/// side-dependent signs) in both the order-1 forcing and the order-2
/// pressure tail.
SeriesPlane wall_operator(const SeriesPlane& f, const GeoPlanes& gp, const SpectralWorkspace& sp) {
    const SeriesPlane df = f.dz();
    const Field2D c3qb = pw_scaled(pw_mul(gp.cg2, gp.qb), 3.0);
    SeriesPlane out(f.grid());
    out.add_scaled(c3qb, df);
    out.add_scaled(c3qb, df.dz().times_z());
    out.add_scaled(pw_scaled(gp.lap_b, -1.0), df);
    out.add_scaled(pw_scaled(gp.bx, -2.0), deriv_x(sp, df));
    out.add_scaled(pw_scaled(gp.by, -2.0), deriv_y(sp, df));
    return out;
}

/// Horizontal divergence of a pair of layer amplitudes at fixed stretched
/// height (coefficient-plane spectral derivatives).
SeriesPlane series_div_h(const SpectralWorkspace& sp, const SeriesPlane& f1,
                         const SeriesPlane& f2) {
    SeriesPlane out = deriv_x(sp, f1);
    out += deriv_y(sp, f2);
    return out;
}

void ensure_decay(const SeriesPlane& f, const StretchedAxis& axis, const char* what) {
    if (f.max_abs_coeff() == 0.0) return;
    const Field2D at0 = f.real_at(0.0);
    const Field2D atz = f.real_at(axis.z_max());
    double scale = 0.0, end = 0.0;
    for (std::size_t k = 0; k < at0.size(); ++k) {
        scale = std::max(scale, std::abs(at0[k]));
        end = std::max(end, std::abs(atz[k]));
    }
    // the wall plane can vanish identically (cancellation), so the coefficient
    // magnitude backstops the reference scale
    scale = std::max(scale, f.max_abs_coeff());
    if (end > axis.tail_tol() * scale)
        throw std::runtime_error(std::string("profiles: ") + what +
                                 " has not decayed below the tail tolerance at z_max = " +
                                 std::to_string(axis.z_max()) + "; increase z_max");
}

void check_same_grid(const Grid2D& a, const Grid2D& b, const char* who) {
    if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace

const char* side_name(LayerSide s) { return s == LayerSide::Bottom ? "bottom" : "top"; }

// ======================================================================
// Order 0
// ======================================================================

Order0Profiles profile_order0(const VecField2D& u, const GeometryBundle& geo, LayerSide side) {
    check_same_grid(u.x.grid(), geo.grid, "profile_order0");
    const GeoPlanes gp = make_geo_planes(geo);
    const Grid2D& g = geo.grid;

    Order0Profiles o;
    o.side = side;
    o.u1 = SeriesPlane(g);
    o.u2 = SeriesPlane(g);
    o.u3 = SeriesPlane(g);
    o.p1 = SeriesPlane(g);

    add_spiral_response(o.u1, o.u2, gp, u);

    // Vertical component: -(cos * grad B + sin * cos(gamma) perp(grad B)) . u
    const ZSeries m = ZSeries::decay_cos();
    const ZSeries s = ZSeries::decay_sin();
    Field2D gbu = pw_mul(gp.bx, u.x);
    gbu += pw_mul(gp.by, u.y);
    Field2D perp = pw_mul(gp.bx, u.y);
    perp -= pw_mul(gp.by, u.x);  // perp(grad B) . u = -By u1 + Bx u2
    o.u3.add_scaled(pw_scaled(gbu, -1.0), m);
    o.u3.add_scaled(pw_scaled(pw_mul(gp.cg, perp), -1.0), s);

    // Layer pressure: phase-shifted spiral shapes (sin +- cos)/sqrt2 against
    // the slope and its perpendicular; the top wall takes the opposite sign.
    ZSeries sp_plus = s + m;   // e^{-z/sqrt2} sin(z/sqrt2 + pi/4) * sqrt2
    ZSeries sp_minus = s - m;  // e^{-z/sqrt2} sin(z/sqrt2 - pi/4) * sqrt2
    sp_plus *= Cplx(kInvSqrt2, 0.0);
    sp_minus *= Cplx(kInvSqrt2, 0.0);
    const double kappa = (side == LayerSide::Bottom) ? 1.0 : -1.0;
    o.p1.add_scaled(pw_scaled(pw_mul(gp.cg, gbu), kappa), sp_plus);
    o.p1.add_scaled(pw_scaled(pw_mul(gp.cg2, perp), kappa), sp_minus);
    return o;
}

// ======================================================================
// Interior order 1
// ======================================================================

Field2D InteriorOrder1::u3_at_zeta(double zeta) const {
    return pw_sum(u3_base, pw_scaled(u3_slope, 1.0 - zeta));
}

Field2D InteriorOrder1::u3_at_height(const Field2D& b, double z) const {
    Field2D out = u3_base;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += (b[k] + 1.0 - z) * u3_slope[k];
    return out;
}

InteriorOrder1 interior_order1(const VecField2D& u, const GeometryBundle& geo,
                               const SpectralWorkspace& sp) {
    check_same_grid(u.x.grid(), geo.grid, "interior_order1");
    const GeoPlanes gp = make_geo_planes(geo);

    // w = (A + I) u; the drift is w / sqrt2.
    VecField2D w(geo.grid);
    w.x = pw_mul(gp.a11, u.x);
    w.x += pw_mul(gp.a12, u.y);
    w.x += u.x;
    w.y = pw_mul(gp.a21, u.x);
    w.y += pw_mul(gp.a22, u.y);
    w.y += u.y;

    InteriorOrder1 out;
    out.uh.x = pw_scaled(w.x, kInvSqrt2);
    out.uh.y = pw_scaled(w.y, kInvSqrt2);

    // div(A u), spectrally; the +I part is divergence-free.
    VecField2D au(geo.grid);
    au.x = pw_mul(gp.a11, u.x);
    au.x += pw_mul(gp.a12, u.y);
    au.y = pw_mul(gp.a21, u.x);
    au.y += pw_mul(gp.a22, u.y);
    const Field2D div_au = sp.divergence(au);

    Field2D hbw = pw_mul(gp.hb1, w.x);
    hbw += pw_mul(gp.hb2, w.y);

    out.u3_slope = pw_scaled(div_au, kInvSqrt2);
    out.u3_slope += pw_scaled(pw_mul(gp.cg2, hbw), 1.5 * kInvSqrt2);

    Field2D gbw = pw_mul(gp.bx, w.x);
    gbw += pw_mul(gp.by, w.y);
    out.u3_base = pw_scaled(gbw, kInvSqrt2);
    return out;
}

// ======================================================================
// Forcing
// ======================================================================

namespace {

/// Everything forcing-related for one side, kept together so the order-1
/// builder can reuse the intermediate pieces.
struct ForcingWork {
    Order0Profiles o0;    // layer response to u
    Order0Profiles o0_t;  // layer response to u_t (the analytic time derivative)
    SeriesPlane f0;       // scalar divergence source, side-correct sign
    ForcingProfiles g;    // diagonalized pair
};

ForcingWork build_forcing(const VecField2D& u, const VecField2D& u_t, const GeometryBundle& geo,
                          const SpectralWorkspace& sp, LayerSide side, const StretchedAxis& axis) {
    check_same_grid(u.x.grid(), geo.grid, "forcing_terms");
    check_same_grid(u_t.x.grid(), geo.grid, "forcing_terms");
    const GeoPlanes gp = make_geo_planes(geo);
    const DiagPlanes dp = make_diag_planes(geo);
    const Grid2D& g = geo.grid;

    ForcingWork wk;
    wk.o0 = profile_order0(u, geo, side);
    wk.o0_t = profile_order0(u_t, geo, side);

    // --- the three-component layer forcing F ---
    SeriesPlane f1(g), f2(g), f3(g);
    // time derivative of the order-0 layer, weighted by sqrt(cos/nu)
    f1.add_scaled(gp.sqrt_cg_nu, wk.o0_t.u1);
    f2.add_scaled(gp.sqrt_cg_nu, wk.o0_t.u2);
    f3.add_scaled(gp.sqrt_cg_nu, wk.o0_t.u3);
    // horizontal gradient of the layer pressure, weighted by 1/cos
    f1.add_scaled(gp.inv_cg, deriv_x(sp, wk.o0.p1));
    f2.add_scaled(gp.inv_cg, deriv_y(sp, wk.o0.p1));
    // slope-weighted pressure term (p1 - z dp1)
    SeriesPlane pm = wk.o0.p1;
    pm -= wk.o0.p1.dz().times_z();
    f1.add_scaled(pw_scaled(pw_mul(gp.cg, gp.hb1), 1.5), pm);
    f2.add_scaled(pw_scaled(pw_mul(gp.cg, gp.hb2), 1.5), pm);
    // curvature/stretching correction of the order-0 layer; enters with
    // opposite signs on the two walls
    const double sgn_wall = (side == LayerSide::Bottom) ? -1.0 : 1.0;
    f1.add_scaled(pw_scaled(gp.cg2, sgn_wall), wall_operator(wk.o0.u1, gp, sp));
    f2.add_scaled(pw_scaled(gp.cg2, sgn_wall), wall_operator(wk.o0.u2, gp, sp));
    f3.add_scaled(pw_scaled(gp.cg2, sgn_wall), wall_operator(wk.o0.u3, gp, sp));

    // --- the scalar divergence source F0 (side-correct sign) ---
    SeriesPlane db(g);
    db.add_scaled(gp.hb1, wk.o0.u1.dz());
    db.add_scaled(gp.hb2, wk.o0.u2.dz());
    SeriesPlane f0 = series_div_h(sp, wk.o0.u1, wk.o0.u2);
    {
        SeriesPlane zdb = db.times_z();
        SeriesPlane tmp(g);
        tmp.add_scaled(pw_scaled(gp.cg2, -1.5), zdb);
        f0 += tmp;
    }
    if (side == LayerSide::Top) {
        SeriesPlane neg(g);
        neg.add_scaled(Cplx(-1.0, 0.0), f0);
        f0 = neg;
    }
    wk.f0 = f0;

    // --- project onto the two eigen-slots ---
    // r = (1 0 Bx; 0 1 By) F +- dz(F0) grad B, then G = Q^-1 H0^-1 r.
    const double sgn_f0 = (side == LayerSide::Bottom) ? 1.0 : -1.0;
    const SeriesPlane df0 = f0.dz();
    SeriesPlane r1 = f1;
    r1.add_scaled(gp.bx, f3);
    r1.add_scaled(pw_scaled(gp.bx, sgn_f0), df0);
    SeriesPlane r2 = f2;
    r2.add_scaled(gp.by, f3);
    r2.add_scaled(pw_scaled(gp.by, sgn_f0), df0);

    wk.g.side = side;
    wk.g.g3 = SeriesPlane(g);
    wk.g.g4 = SeriesPlane(g);
    wk.g.g3.add_scaled(dp.w11, r1);
    wk.g.g3.add_scaled(dp.w12, r2);
    wk.g.g4.add_scaled(dp.w21, r1);
    wk.g.g4.add_scaled(dp.w22, r2);

    // both amplitudes must be negligible at the truncation height
    for (const SeriesPlane* s : {&wk.g.g3, &wk.g.g4}) {
        double scale = 0.0, end = 0.0;
        for (std::size_t k = 0; k < s->size(); ++k) {
            scale = std::max(scale, std::abs(s->at(k).value(0.0)));
            end = std::max(end, std::abs(s->at(k).value(axis.z_max())));
        }
        scale = std::max(scale, s->max_abs_coeff());
        if (scale > 0.0 && end > axis.tail_tol() * scale)
            throw std::runtime_error(
                "forcing_terms: diagonalized forcing has not decayed below the tail tolerance "
                "at z_max = " +
                std::to_string(axis.z_max()) + "; increase z_max");
    }
    return wk;
}

}  // namespace

ForcingProfiles forcing_terms(const VecField2D& u, const VecField2D& u_t,
                              const GeometryBundle& geo, const SpectralWorkspace& sp,
                              LayerSide side, const StretchedAxis& axis) {
    return build_forcing(u, u_t, geo, sp, side, axis).g;
}

// ======================================================================
// Order 1
// ======================================================================

namespace {

Order1Profiles build_order1(const ForcingWork& wk, const InteriorOrder1& inter,
                            const GeometryBundle& geo, const SpectralWorkspace& sp,
                            LayerSide side, const StretchedAxis& axis,
                            PressureTailTimeSign p2_sign) {
    const GeoPlanes gp = make_geo_planes(geo);
    const DiagPlanes dp = make_diag_planes(geo);
    const Grid2D& g = geo.grid;

    Order1Profiles o;
    o.side = side;
    o.u1 = SeriesPlane(g);
    o.u2 = SeriesPlane(g);

    // homogeneous part: the spiral response to the interior drift
    add_spiral_response(o.u1, o.u2, gp, inter.uh);

    // particular part: Re Q (conv_p g3, conv_m g4)
    const SeriesPlane c3 = wk.g.g3.conv(z_lambda_p());
    const SeriesPlane c4 = wk.g.g4.conv(z_lambda_m());
    SeriesPlane v1(g), v2(g);
    v1.add_scaled(dp.q11, c3);
    v1.add_scaled(dp.q12, c4);
    v2.add_scaled(dp.q21, c3);
    v2.add_scaled(dp.q22, c4);
    o.u1 += v1.real_part();
    o.u2 += v2.real_part();

    // vertical component: tail of (F0 - grad B . dz(U1_h))
    SeriesPlane integ = wk.f0;
    integ.add_scaled(pw_scaled(gp.bx, -1.0), o.u1.dz());
    integ.add_scaled(pw_scaled(gp.by, -1.0), o.u2.dz());
    o.u3 = integ.tail();

    // order-2 layer pressure: tail of the vertical momentum balance of the
    // layer. The whole integrand flips sign between the two walls; the time
    // term additionally carries the configurable convention.
    const double st = (p2_sign == PressureTailTimeSign::Plus) ? 1.0 : -1.0;
    const double sgn = (side == LayerSide::Bottom) ? 1.0 : -1.0;
    SeriesPlane pint(g);
    pint.add_scaled(pw_scaled(gp.cg, -sgn), o.u3.dz().dz());
    pint.add_scaled(pw_scaled(gp.cg32_inv_sqnu, st * sgn), wk.o0_t.u3);
    pint.add_scaled(pw_scaled(gp.cg3, -sgn), wall_operator(wk.o0.u3, gp, sp));
    o.p2 = pint.tail();

    ensure_decay(o.u1, axis, "order-1 layer velocity (x)");
    ensure_decay(o.u2, axis, "order-1 layer velocity (y)");
    ensure_decay(o.u3, axis, "order-1 layer velocity (z)");
    ensure_decay(o.p2, axis, "order-2 layer pressure");
    return o;
}

}  // namespace

Order1Profiles profile_order1(const VecField2D& u, const VecField2D& u_t,
                              const GeometryBundle& geo, const SpectralWorkspace& sp,
                              LayerSide side, const StretchedAxis& axis,
                              PressureTailTimeSign p2_sign) {
    const ForcingWork wk = build_forcing(u, u_t, geo, sp, side, axis);
    const InteriorOrder1 inter = interior_order1(u, geo, sp);
    return build_order1(wk, inter, geo, sp, side, axis, p2_sign);
}

// ======================================================================
// Order 2
// ======================================================================

Order2Profiles profile_order2(const Order1Profiles& o1, const GeometryBundle& geo,
                              const SpectralWorkspace& sp, LayerSide side,
                              const StretchedAxis& axis) {
    const GeoPlanes gp = make_geo_planes(geo);
    const Grid2D& g = geo.grid;

    // Divergence left over by the order-1 horizontal layer velocity; only the
    // vertical component can absorb it. The integrand flips sign between the
    // walls.
    const double sgn = (side == LayerSide::Bottom) ? 1.0 : -1.0;
    SeriesPlane integ(g);
    integ.add_scaled(pw_scaled(pw_mul(gp.cg2, gp.hb1), 1.5 * sgn), o1.u1);
    integ.add_scaled(pw_scaled(pw_mul(gp.cg2, gp.hb2), 1.5 * sgn), o1.u2);
    integ.add_scaled(Cplx(sgn, 0.0), series_div_h(sp, o1.u1, o1.u2));
    SeriesPlane db(g);
    db.add_scaled(gp.hb1, o1.u1.dz());
    db.add_scaled(gp.hb2, o1.u2.dz());
    integ.add_scaled(pw_scaled(gp.cg2, -1.5 * sgn), db.times_z());

    Order2Profiles o;
    o.side = side;
    o.u3 = integ.tail();
    o.u3_int = pw_scaled(o.u3.real_at(0.0), -1.0);
    ensure_decay(o.u3, axis, "order-2 layer velocity (z)");
    return o;
}

// ======================================================================
// Full set
// ======================================================================

LayerProfileSet build_layer_profiles(const VecField2D& u, const VecField2D& u_t,
                                     const GeometryBundle& geo, const SpectralWorkspace& sp,
                                     LayerSide side, const StretchedAxis& axis,
                                     PressureTailTimeSign p2_sign) {
    LayerProfileSet set;
    set.side = side;
    const ForcingWork wk = build_forcing(u, u_t, geo, sp, side, axis);
    set.o0 = wk.o0;
    set.interior = interior_order1(u, geo, sp);
    set.o1 = build_order1(wk, set.interior, geo, sp, side, axis, p2_sign);
    set.o2 = profile_order2(set.o1, geo, sp, side, axis);
    return set;
}

// ======================================================================
// Sampling, norms, dumps
// ======================================================================

std::vector<Cplx> sample_series(const ZSeries& g, const StretchedAxis& axis) {
    std::vector<Cplx> out(axis.size());
    for (int q = 0; q < axis.size(); ++q) out[q] = g.value(axis.node(q));
    return out;
}

double layer_l2_norm(const SeriesPlane& f, const Field2D& delta, const StretchedAxis& axis) {
    check_same_grid(f.grid(), delta.grid(), "layer_l2_norm");
    const double da = f.grid().dx() * f.grid().dy();
    double total = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        double col = 0.0;
        for (int q = 0; q < axis.size(); ++q) {
            const double a = std::abs(f.at(k).value(axis.node(q)));
            col += axis.weights()[q] * a * a;
        }
        total += delta[k] * col * da;
    }
    return std::sqrt(total);
}

void write_profile_csv(std::ostream& os, const LayerProfileSet& set, int i, int j,
                       const StretchedAxis& axis) {
    const Grid2D& g = set.o0.u1.grid();
    if (i < 0 || i >= g.nx || j < 0 || j >= g.ny)
        throw std::invalid_argument("write_profile_csv: grid point (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") out of range");
    const std::size_t k = g.idx(i, j);
    os << "z,u0_1,u0_2,u0_3,p1,u1_1,u1_2,u1_3,p2,u3_2\n";
    os << std::setprecision(17);
    for (int q = 0; q < axis.size(); ++q) {
        const double z = axis.node(q);
        os << z << ',' << set.o0.u1.at(k).real_value(z) << ',' << set.o0.u2.at(k).real_value(z)
           << ',' << set.o0.u3.at(k).real_value(z) << ',' << set.o0.p1.at(k).real_value(z) << ','
           << set.o1.u1.at(k).real_value(z) << ',' << set.o1.u2.at(k).real_value(z) << ','
           << set.o1.u3.at(k).real_value(z) << ',' << set.o1.p2.at(k).real_value(z) << ','
           << set.o2.u3.at(k).real_value(z) << '\n';
    }
}

}  // namespace ekman
