/// @file assembler.cpp
/// @brief Terrain-following assembly of the approximate solution and the
///        explicit divergence corrector.

#include "ekman/assembler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

namespace ekman {

namespace {

/// Layer coordinates beyond this are treated as fully decayed; the slowest
/// envelope z^5 exp(-z/sqrt2) is below 1e-21 there.
constexpr double kLayerCut = 80.0;

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t q = 0; q + 1 < n; ++q) {
        const double h = 0.5 * (nodes[q + 1] - nodes[q]);
        w[q] += h;
        w[q + 1] += h;
    }
    return w;
}

void check_grid(const Grid2D& a, const Grid2D& b, const char* who) {
    if (a != b) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

/// Per-side series bundle with the vertical derivatives taken once.
struct SideSeries {
    const LayerProfileSet* set;
    SeriesPlane d0_1, d0_2, d0_3, d1_1, d1_2, d1_3, d2_3;

    explicit SideSeries(const LayerProfileSet& s)
        : set(&s), d0_1(s.o0.u1.dz()), d0_2(s.o0.u2.dz()), d0_3(s.o0.u3.dz()),
          d1_1(s.o1.u1.dz()), d1_2(s.o1.u2.dz()), d1_3(s.o1.u3.dz()), d2_3(s.o2.u3.dz()) {}

    /// Velocity stack and its derivative in the side's own layer coordinate.
    /// val = (u0 + dl u1 [+ dl^2 u2_3]), dvl = d/dz_tilde of the same.
    void eval(std::size_t k, double zt, double dl, double val[3], double dvl[3]) const {
        if (zt > kLayerCut) {
            val[0] = val[1] = val[2] = dvl[0] = dvl[1] = dvl[2] = 0.0;
            return;
        }
        const double dl2 = dl * dl;
        val[0] = set->o0.u1.at(k).real_value(zt) + dl * set->o1.u1.at(k).real_value(zt);
        val[1] = set->o0.u2.at(k).real_value(zt) + dl * set->o1.u2.at(k).real_value(zt);
        val[2] = set->o0.u3.at(k).real_value(zt) + dl * set->o1.u3.at(k).real_value(zt) +
                 dl2 * set->o2.u3.at(k).real_value(zt);
        dvl[0] = d0_1.at(k).real_value(zt) + dl * d1_1.at(k).real_value(zt);
        dvl[1] = d0_2.at(k).real_value(zt) + dl * d1_2.at(k).real_value(zt);
        dvl[2] = d0_3.at(k).real_value(zt) + dl * d1_3.at(k).real_value(zt) +
                 dl2 * d2_3.at(k).real_value(zt);
    }

    /// Pressure stack dl p1 + dl^2 p2 at the given layer coordinate.
    double pressure(std::size_t k, double zt, double dl) const {
        if (zt > kLayerCut) return 0.0;
        return dl * set->o0.p1.at(k).real_value(zt) + dl * dl * set->o1.p2.at(k).real_value(zt);
    }
};

}  // namespace

// ======================================================================
// Field3D / ZetaGrid
// ======================================================================

Field2D Field3D::plane(int q) const {
    Field2D f(grid);
    const std::size_t off = static_cast<std::size_t>(q) * grid.size();
    for (std::size_t k = 0; k < grid.size(); ++k) f[k] = v[off + k];
    return f;
}

void Field3D::set_plane(int q, const Field2D& f) {
    const std::size_t off = static_cast<std::size_t>(q) * grid.size();
    for (std::size_t k = 0; k < grid.size(); ++k) v[off + k] = f[k];
}

double Field3D::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

ZetaGrid make_zeta_grid(int n, double wall_spacing) {
    if (n < 8) throw std::invalid_argument("make_zeta_grid: need at least 8 nodes");
    if (!(wall_spacing > 0.0))
        throw std::invalid_argument("make_zeta_grid: wall spacing must be positive");

    auto first_spacing = [n](double sigma) {
        const double s = 1.0 / (n - 1);
        return 1.0 + std::tanh(sigma * (2.0 * s - 1.0)) / std::tanh(sigma);
    };

    // the first interval shrinks monotonically in sigma; bisect to the target
    double lo = 1e-3, hi = 30.0;
    if (first_spacing(hi) > wall_spacing)
        throw std::invalid_argument(
            "make_zeta_grid: cannot reach wall spacing " + std::to_string(wall_spacing) +
            " with " + std::to_string(n) + " nodes; increase the vertical resolution");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (first_spacing(mid) > wall_spacing ? lo : hi) = mid;
    }

    ZetaGrid zg;
    zg.sigma = hi;
    zg.nodes.resize(n);
    const double th = std::tanh(zg.sigma);
    for (int q = 0; q < n; ++q) {
        const double s = static_cast<double>(q) / (n - 1);
        zg.nodes[q] = 1.0 + std::tanh(zg.sigma * (2.0 * s - 1.0)) / th;
    }
    zg.nodes.front() = 0.0;  // exact wall values
    zg.nodes.back() = 2.0;
    for (int q = 1; q < n; ++q)
        if (!(zg.nodes[q] > zg.nodes[q - 1]))
            throw std::invalid_argument(
                "make_zeta_grid: nodes collapsed; wall spacing " + std::to_string(wall_spacing) +
                " is below what " + std::to_string(n) + " nodes can resolve");
    zg.weights = trapezoid_weights(zg.nodes);
    return zg;
}

double slab_l2(const Field3D& f, const ZetaGrid& zg) {
    if (f.nz() != zg.size()) throw std::invalid_argument("slab_l2: grid mismatch");
    const double dA = f.grid.dx() * f.grid.dy();
    double acc = 0.0;
    for (int q = 0; q < f.nz(); ++q) {
        const std::size_t off = static_cast<std::size_t>(q) * f.grid.size();
        double plane = 0.0;
        for (std::size_t k = 0; k < f.grid.size(); ++k) plane += f.v[off + k] * f.v[off + k];
        acc += zg.weights[q] * plane * dA;
    }
    return std::sqrt(acc);
}

// ======================================================================
// Terrain derivative kernel
// ======================================================================

Field2D terrain_divergence_plane(const SpectralWorkspace& sp, const GeometryBundle& geo,
                                 const Field2D& u1, const Field2D& u2, const Field2D& du1,
                                 const Field2D& du2, const Field2D& du3) {
    check_grid(u1.grid(), geo.grid, "terrain_divergence_plane");
    const Field2D dxu = sp.dx(u1);
    const Field2D dyu = sp.dy(u2);
    Field2D out(geo.grid);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = dxu[k] - geo.bx[k] * du1[k] + dyu[k] - geo.by[k] * du2[k] + du3[k];
    return out;
}

// ======================================================================
// Uncorrected stack
// ======================================================================

UncorrectedField assemble_uncorrected(const VecField2D& u_bar, const LayerProfileSet& bottom,
                                      const LayerProfileSet& top, const GeometryBundle& geo,
                                      const SpectralWorkspace& sp, const CutoffProfile& chi,
                                      const ZetaGrid& zg) {
    const Grid2D& g = geo.grid;
    check_grid(u_bar.grid(), g, "assemble_uncorrected");
    check_grid(bottom.o0.u1.grid(), g, "assemble_uncorrected");
    check_grid(top.o0.u1.grid(), g, "assemble_uncorrected");
    if (bottom.side != LayerSide::Bottom || top.side != LayerSide::Top)
        throw std::invalid_argument("assemble_uncorrected: profile sets passed in wrong order");

    const SideSeries sb(bottom), st(top);
    const InteriorOrder1& in = bottom.interior;

    UncorrectedField out;
    out.u1 = Field3D(g, zg.nodes);
    out.u2 = Field3D(g, zg.nodes);
    out.u3 = Field3D(g, zg.nodes);
    out.defect = Field3D(g, zg.nodes);

    Field2D U1(g), U2(g), U3(g), D1(g), D2(g), D3(g);
    for (int q = 0; q < zg.size(); ++q) {
        const double zeta = zg.nodes[q];
        const double c = chi.value(zeta), cp = chi.deriv(zeta);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double dl = geo.delta[k];
            const double dl2 = dl * dl;
            double vb[3], db[3], vt[3], dt[3];
            sb.eval(k, zeta / dl, dl, vb, db);
            st.eval(k, (2.0 - zeta) / dl, dl, vt, dt);
            // the per-side vertical stacks carry their z-independent
            // second-order interior counterparts inside the blend
            vb[2] += dl2 * bottom.o2.u3_int[k];
            vt[2] += dl2 * top.o2.u3_int[k];

            const double ubar3 = geo.bx[k] * u_bar.x[k] + geo.by[k] * u_bar.y[k];
            const double col3 = in.u3_base[k] + (1.0 - zeta) * in.u3_slope[k];

            U1[k] = u_bar.x[k] + dl * in.uh.x[k] + (1.0 - c) * vb[0] + c * vt[0];
            U2[k] = u_bar.y[k] + dl * in.uh.y[k] + (1.0 - c) * vb[1] + c * vt[1];
            U3[k] = ubar3 + dl * col3 + (1.0 - c) * vb[2] + c * vt[2];

            // d/dzeta: the top layer runs against zeta, and the blend adds
            // chi' times the stack mismatch
            D1[k] = (1.0 - c) * db[0] / dl - c * dt[0] / dl + cp * (vt[0] - vb[0]);
            D2[k] = (1.0 - c) * db[1] / dl - c * dt[1] / dl + cp * (vt[1] - vb[1]);
            D3[k] = (1.0 - c) * db[2] / dl - c * dt[2] / dl + cp * (vt[2] - vb[2]) -
                    dl * in.u3_slope[k];
        }
        out.u1.set_plane(q, U1);
        out.u2.set_plane(q, U2);
        out.u3.set_plane(q, U3);

        Field2D div = terrain_divergence_plane(sp, geo, U1, U2, D1, D2, D3);
        for (std::size_t k = 0; k < g.size(); ++k) div[k] = -div[k];
        out.defect.set_plane(q, div);
    }
    out.defect_l2 = slab_l2(out.defect, zg);
    out.defect_linf = out.defect.max_abs();
    return out;
}

namespace {

/// Second vertical derivatives and pressure tails for one side, on top of the
/// first-derivative bundle.
struct SideSeriesDeep {
    SideSeries base;
    SeriesPlane dd0_1, dd0_2, dd0_3, dd1_1, dd1_2, dd1_3, dd2_3;
    SeriesPlane dp1, dp2;

    explicit SideSeriesDeep(const LayerProfileSet& s)
        : base(s), dd0_1(base.d0_1.dz()), dd0_2(base.d0_2.dz()), dd0_3(base.d0_3.dz()),
          dd1_1(base.d1_1.dz()), dd1_2(base.d1_2.dz()), dd1_3(base.d1_3.dz()),
          dd2_3(base.d2_3.dz()), dp1(s.o0.p1.dz()), dp2(s.o1.p2.dz()) {}

    /// Stack value, first and second derivative in the layer coordinate.
    void eval2(std::size_t k, double zt, double dl, double val[3], double dvl[3],
               double ddvl[3]) const {
        base.eval(k, zt, dl, val, dvl);
        if (zt > kLayerCut) {
            ddvl[0] = ddvl[1] = ddvl[2] = 0.0;
            return;
        }
        const double dl2 = dl * dl;
        ddvl[0] = dd0_1.at(k).real_value(zt) + dl * dd1_1.at(k).real_value(zt);
        ddvl[1] = dd0_2.at(k).real_value(zt) + dl * dd1_2.at(k).real_value(zt);
        ddvl[2] = dd0_3.at(k).real_value(zt) + dl * dd1_3.at(k).real_value(zt) +
                  dl2 * dd2_3.at(k).real_value(zt);
    }

    /// Pressure tail dl p1 + dl^2 p2 and its derivative in the layer coordinate.
    void pressure2(std::size_t k, double zt, double dl, double& p, double& dp) const {
        if (zt > kLayerCut) {
            p = dp = 0.0;
            return;
        }
        const double dl2 = dl * dl;
        p = dl * base.set->o0.p1.at(k).real_value(zt) + dl2 * base.set->o1.p2.at(k).real_value(zt);
        dp = dl * dp1.at(k).real_value(zt) + dl2 * dp2.at(k).real_value(zt);
    }
};

}  // namespace

StackDerivatives stack_derivatives(const LayerProfileSet& bottom, const LayerProfileSet& top,
                                   const GeometryBundle& geo, const CutoffProfile& chi,
                                   const ZetaGrid& zg) {
    const Grid2D& g = geo.grid;
    check_grid(bottom.o0.u1.grid(), g, "stack_derivatives");
    check_grid(top.o0.u1.grid(), g, "stack_derivatives");
    if (bottom.side != LayerSide::Bottom || top.side != LayerSide::Top)
        throw std::invalid_argument("stack_derivatives: profile sets passed in wrong order");

    const SideSeriesDeep sb(bottom), st(top);
    const InteriorOrder1& in = bottom.interior;

    StackDerivatives out;
    out.du1 = Field3D(g, zg.nodes);
    out.du2 = Field3D(g, zg.nodes);
    out.du3 = Field3D(g, zg.nodes);
    out.d2u1 = Field3D(g, zg.nodes);
    out.d2u2 = Field3D(g, zg.nodes);
    out.d2u3 = Field3D(g, zg.nodes);
    out.p_layer = Field3D(g, zg.nodes);
    out.dp_layer = Field3D(g, zg.nodes);

    for (int q = 0; q < zg.size(); ++q) {
        const double zeta = zg.nodes[q];
        const double c = chi.value(zeta), cp = chi.deriv(zeta), cpp = chi.deriv2(zeta);
        const std::size_t off = static_cast<std::size_t>(q) * g.size();
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double dl = geo.delta[k];
            const double dl2 = dl * dl;
            double vb[3], db[3], ddb[3], vt[3], dt[3], ddt[3];
            sb.eval2(k, zeta / dl, dl, vb, db, ddb);
            st.eval2(k, (2.0 - zeta) / dl, dl, vt, dt, ddt);
            vb[2] += dl2 * bottom.o2.u3_int[k];
            vt[2] += dl2 * top.o2.u3_int[k];

            // the side stacks in the channel coordinate: F_b(zeta) = S_b(zeta/dl),
            // F_t(zeta) = S_t((2 - zeta)/dl); their derivatives pick up 1/dl per
            // order and a sign per order on the top side
            for (int i = 0; i < 3; ++i) {
                const double fb1 = db[i] / dl, ft1 = -dt[i] / dl;
                const double fb2 = ddb[i] / dl2, ft2 = ddt[i] / dl2;
                const double jump = vt[i] - vb[i];
                double d1 = (1.0 - c) * fb1 + c * ft1 + cp * jump;
                double d2 = (1.0 - c) * fb2 + c * ft2 + 2.0 * cp * (ft1 - fb1) + cpp * jump;
                if (i == 2) d1 -= dl * in.u3_slope[k];  // interior column is affine in zeta
                (i == 0 ? out.du1 : i == 1 ? out.du2 : out.du3).v[off + k] = d1;
                (i == 0 ? out.d2u1 : i == 1 ? out.d2u2 : out.d2u3).v[off + k] = d2;
            }

            double pb, dpb, pt, dpt;
            sb.pressure2(k, zeta / dl, dl, pb, dpb);
            st.pressure2(k, (2.0 - zeta) / dl, dl, pt, dpt);
            out.p_layer.v[off + k] = (1.0 - c) * pb + c * pt;
            out.dp_layer.v[off + k] = (1.0 - c) * dpb / dl - c * dpt / dl + cp * (pt - pb);
        }
    }
    return out;
}

// ======================================================================
// Divergence corrector
// ======================================================================

Corrector divergence_corrector(const Field3D& defect, const GeometryBundle& geo,
                               const SpectralWorkspace& sp) {
    const Grid2D& g = geo.grid;
    check_grid(defect.grid, g, "divergence_corrector");
    const int nz = defect.nz();
    if (nz < 8) throw std::invalid_argument("divergence_corrector: too few vertical nodes");
    const std::vector<double>& zeta = defect.zeta;
    const std::vector<double> w = trapezoid_weights(zeta);

    Corrector out;

    // the construction needs the defect away from the walls
    const double linf = defect.max_abs();
    double boundary = 0.0;
    for (int q = 0; q < nz; ++q) {
        if (zeta[q] > 0.25 && zeta[q] < 1.75) continue;
        const std::size_t off = static_cast<std::size_t>(q) * g.size();
        for (std::size_t k = 0; k < g.size(); ++k)
            boundary = std::max(boundary, std::abs(defect.v[off + k]));
    }
    out.boundary_max = boundary;
    // relative test for structural support, absolute floor for roundoff noise
    if (boundary > 1e-3 * linf && boundary > 1e-10)
        throw std::runtime_error(
            "divergence_corrector: defect support reaches the boundary (max " +
            std::to_string(boundary) + " outside the interior strip); construction invalid");

    // bump amplitude g = (vertical integral of the defect) / (bump mass)
    double bump_mass = 0.0;
    for (int q = 0; q < nz; ++q) bump_mass += w[q] * corrector_bump(zeta[q]);
    out.g = Field2D(g);
    for (int q = 0; q < nz; ++q) {
        const std::size_t off = static_cast<std::size_t>(q) * g.size();
        for (std::size_t k = 0; k < g.size(); ++k) out.g[k] += w[q] * defect.v[off + k];
    }
    for (std::size_t k = 0; k < g.size(); ++k) out.g[k] /= bump_mass;

    // horizontal potential under the bump; the box mean cannot be generated
    // by a periodic potential, so it is removed and reported
    out.mean_g = sp.mean(out.g);
    out.phi = sp.poisson(out.g);
    const Field2D& phi = out.phi;
    const Field2D phix = sp.dx(phi), phiy = sp.dy(phi);
    Field2D slope_phi(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        slope_phi[k] = geo.bx[k] * phix[k] + geo.by[k] * phiy[k];

    out.v1 = Field3D(g, zeta);
    out.v2 = Field3D(g, zeta);
    out.v3 = Field3D(g, zeta);
    Field3D integrand(g, zeta);  // d/dzeta of the antiderivative part
    for (int q = 0; q < nz; ++q) {
        const double eta = corrector_bump(zeta[q]);
        const std::size_t off = static_cast<std::size_t>(q) * g.size();
        for (std::size_t k = 0; k < g.size(); ++k) {
            out.v1.v[off + k] = eta * phix[k];
            out.v2.v[off + k] = eta * phiy[k];
            integrand.v[off + k] = defect.v[off + k] - eta * out.g[k];
        }
    }
    // vertical antiderivative, plus the closed-form metric compensation
    // eta * grad B . grad phi (its zeta-derivative cancels the terrain term
    // -grad B . d_zeta V_h exactly)
    for (int q = 1; q < nz; ++q) {
        const double h = 0.5 * (zeta[q] - zeta[q - 1]);
        const std::size_t off = static_cast<std::size_t>(q) * g.size();
        const std::size_t prev = off - g.size();
        for (std::size_t k = 0; k < g.size(); ++k)
            out.v3.v[off + k] =
                out.v3.v[prev + k] + h * (integrand.v[off + k] + integrand.v[prev + k]);
    }
    for (int q = 0; q < nz; ++q) {
        const double eta = corrector_bump(zeta[q]);
        const std::size_t off = static_cast<std::size_t>(q) * g.size();
        for (std::size_t k = 0; k < g.size(); ++k) out.v3.v[off + k] += eta * slope_phi[k];
    }

    // measured closure: terrain divergence of V against the defect
    double num = 0.0, den = 0.0;
    const double dA = g.dx() * g.dy();
    for (int q = 0; q < nz; ++q) {
        const double etap = corrector_bump_deriv(zeta[q]);
        const std::size_t off = static_cast<std::size_t>(q) * g.size();
        Field2D v1p = out.v1.plane(q), v2p = out.v2.plane(q);
        Field2D d1(g), d2(g), d3(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            d1[k] = etap * phix[k];
            d2[k] = etap * phiy[k];
            d3[k] = integrand.v[off + k] + etap * slope_phi[k];
        }
        const Field2D div = terrain_divergence_plane(sp, geo, v1p, v2p, d1, d2, d3);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double r = div[k] - defect.v[off + k];
            num += w[q] * r * r * dA;
            den += w[q] * defect.v[off + k] * defect.v[off + k] * dA;
        }
    }
    out.closure_l2 = (den > 0.0) ? std::sqrt(num / den) : std::sqrt(num);
    return out;
}

// ======================================================================
// Full assembly
// ======================================================================

ApproxSolution assemble_approx(const LimitSolver& limit, const AssemblyOptions& opts) {
    ApproxSolution s;
    s.geometry = limit.geometry();
    const Grid2D& g = s.geometry.grid;
    const SpectralWorkspace sp(g);

    s.u_bar = limit.velocity();
    s.u_bar_t = limit.rhs(s.u_bar);
    s.time = limit.time();
    s.eps = s.geometry.eps;
    s.nu = s.geometry.nu;
    limit.pressure(s.u_bar, s.p_bar, s.p0_int);

    s.axis = opts.axis;
    s.p2_sign = opts.p2_sign;
    s.chi = make_cutoff(opts.cutoff_order);
    s.bottom = build_layer_profiles(s.u_bar, s.u_bar_t, s.geometry, sp, LayerSide::Bottom,
                                    s.axis, opts.p2_sign);
    s.top = build_layer_profiles(s.u_bar, s.u_bar_t, s.geometry, sp, LayerSide::Top, s.axis,
                                 opts.p2_sign);

    double delta_min = s.geometry.delta[0];
    for (std::size_t k = 0; k < g.size(); ++k)
        delta_min = std::min(delta_min, s.geometry.delta[k]);
    s.zgrid = make_zeta_grid(opts.n_zeta, 0.5 * delta_min);

    UncorrectedField unc =
        assemble_uncorrected(s.u_bar, s.bottom, s.top, s.geometry, sp, s.chi, s.zgrid);
    const Corrector cor = divergence_corrector(unc.defect, s.geometry, sp);

    s.defect = std::move(unc.defect);
    s.info.defect_l2 = unc.defect_l2;
    s.info.defect_linf = unc.defect_linf;
    s.info.closure_l2 = cor.closure_l2;
    s.info.mean_g = cor.mean_g;
    s.info.boundary_max = cor.boundary_max;

    s.u1 = std::move(unc.u1);
    s.u2 = std::move(unc.u2);
    s.u3 = std::move(unc.u3);
    for (std::size_t n = 0; n < s.u1.v.size(); ++n) {
        s.u1.v[n] += cor.v1.v[n];
        s.u2.v[n] += cor.v2.v[n];
        s.u3.v[n] += cor.v3.v[n];
    }
    s.v1 = std::move(cor.v1);
    s.v2 = std::move(cor.v2);
    s.v3 = std::move(cor.v3);

    // pressure stack: interior part, limit pressure at its own order, and the
    // blended layer tails
    s.p = Field3D(g, s.zgrid.nodes);
    const SideSeries sb(s.bottom), st(s.top);
    Field2D P(g);
    for (int q = 0; q < s.zgrid.size(); ++q) {
        const double zeta = s.zgrid.nodes[q];
        const double c = s.chi.value(zeta);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double dl = s.geometry.delta[k];
            P[k] = s.p0_int[k] + s.eps * s.p_bar[k] +
                   (1.0 - c) * sb.pressure(k, zeta / dl, dl) +
                   c * st.pressure(k, (2.0 - zeta) / dl, dl);
        }
        s.p.set_plane(q, P);
    }
    return s;
}

double approx_minus_limit_l2(const ApproxSolution& s) {
    const Grid2D& g = s.geometry.grid;
    const double dA = g.dx() * g.dy();
    double acc = 0.0;
    for (int q = 0; q < s.zgrid.size(); ++q) {
        const std::size_t off = static_cast<std::size_t>(q) * g.size();
        double plane = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double ubar3 = s.geometry.bx[k] * s.u_bar.x[k] + s.geometry.by[k] * s.u_bar.y[k];
            const double d1 = s.u1.v[off + k] - s.u_bar.x[k];
            const double d2 = s.u2.v[off + k] - s.u_bar.y[k];
            const double d3 = s.u3.v[off + k] - ubar3;
            plane += d1 * d1 + d2 * d2 + d3 * d3;
        }
        acc += s.zgrid.weights[q] * plane * dA;
    }
    return std::sqrt(acc);
}

// ======================================================================
// Snapshot IO
// ======================================================================

namespace {

void write_doubles(std::ofstream& os, const double* p, std::size_t n) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::ifstream& is, double* p, std::size_t n, const std::string& path) {
    is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("load_snapshot: truncated file " + path);
}

}  // namespace

void save_snapshot(const ApproxSolution& s, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_snapshot: cannot open " + path);
    const std::int64_t dims[3] = {s.geometry.grid.nx, s.geometry.grid.ny, s.zgrid.size()};
    os.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    const double head[5] = {s.geometry.grid.lx, s.geometry.grid.ly, s.eps, s.nu, s.time};
    write_doubles(os, head, 5);
    write_doubles(os, s.zgrid.nodes.data(), s.zgrid.nodes.size());
    for (const Field3D* f : {&s.u1, &s.u2, &s.u3, &s.p})
        write_doubles(os, f->v.data(), f->v.size());
    if (!os) throw std::runtime_error("save_snapshot: write failed for " + path);
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_snapshot: cannot open " + path);
    std::int64_t dims[3];
    is.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!is) throw std::runtime_error("load_snapshot: truncated file " + path);
    if (dims[0] < 8 || dims[0] > (1 << 20) || dims[1] < 8 || dims[1] > (1 << 20) || dims[2] < 2 ||
        dims[2] > (1 << 20))
        throw std::runtime_error("load_snapshot: implausible header in " + path);
    double head[5];
    read_doubles(is, head, 5, path);

    Snapshot snap;
    snap.grid = Grid2D(static_cast<int>(dims[0]), static_cast<int>(dims[1]), head[0], head[1]);
    snap.eps = head[2];
    snap.nu = head[3];
    snap.time = head[4];
    snap.zeta.resize(static_cast<std::size_t>(dims[2]));
    read_doubles(is, snap.zeta.data(), snap.zeta.size(), path);
    for (Field3D* f : {&snap.u1, &snap.u2, &snap.u3, &snap.p}) {
        *f = Field3D(snap.grid, snap.zeta);
        read_doubles(is, f->v.data(), f->v.size(), path);
    }
    return snap;
}

}  // namespace ekman
