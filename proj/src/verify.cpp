/// @file verify.cpp
/// @brief Strong-form residual of the assembled field, vertical-transport
///        norms, epsilon sweeps and decay-rate assessments.

#include "ekman/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ekman {

namespace {

/// Unweighted least squares of log10(y) against log10(x); standard error of
/// the slope from the residual variance.
void loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                double& se) {
    const std::size_t n = x.size();
    slope = se = 0.0;
    if (n < 3) return;
    for (double v : y)
        if (!(v > 0.0)) return;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log10(x[i]);
        ly[i] = std::log10(y[i]);
    }
    double xb = 0.0, yb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xb += lx[i];
        yb += ly[i];
    }
    xb /= n;
    yb /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - xb) * (lx[i] - xb);
        sxy += (lx[i] - xb) * (ly[i] - yb);
    }
    if (sxx == 0.0) return;
    slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - yb - slope * (lx[i] - xb);
        rss += r * r;
    }
    se = std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
}

}  // namespace

// ======================================================================
// Residual
// ======================================================================

const char* ResidualReport::largest_group() const {
    const char* name = "interior";
    double best = interior_l2;
    if (layer_l2 > best) {
        best = layer_l2;
        name = "layer";
    }
    if (advection_l2 > best) {
        best = advection_l2;
        name = "advection";
    }
    if (corrector_l2 > best) {
        best = corrector_l2;
        name = "corrector";
    }
    return name;
}

std::string ResidualReport::summary() const {
    std::ostringstream os;
    os << std::setprecision(6);
    os << "residual at eps = " << eps << ", t = " << time << "\n"
       << "  total      " << total_l2 << "  (horizontal " << rho_h_l2 << ", vertical " << rho3_l2
       << ")\n"
       << "  interior   " << interior_l2 << "\n"
       << "  layer      " << layer_l2 << "\n"
       << "  advection  " << advection_l2 << "\n"
       << "  corrector  " << corrector_l2 << "\n"
       << "  split consistency " << std::setprecision(3) << split_consistency << "\n";
    return os.str();
}

ResidualReport residual_rho(const ApproxSolution& s, const LimitSolver& limit) {
    const GeometryBundle& geo = s.geometry;
    const Grid2D& g = geo.grid;
    if (g != limit.grid())
        throw std::invalid_argument("residual_rho: solution and solver grids differ");
    if (s.time != limit.time())
        throw std::invalid_argument("residual_rho: solution was assembled at t = " +
                                    std::to_string(s.time) + " but the solver is at t = " +
                                    std::to_string(limit.time()));
    {
        const VecField2D& v = limit.velocity();
        double d = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            d = std::max({d, std::abs(v.x[k] - s.u_bar.x[k]), std::abs(v.y[k] - s.u_bar.y[k])});
        if (d != 0.0)
            throw std::invalid_argument(
                "residual_rho: the solver state differs from the assembled one");
    }

    const SpectralWorkspace sp(g);
    const double eps = s.eps, nueps = s.nu * eps, inv_eps = 1.0 / eps;

    ResidualReport rep;
    rep.eps = eps;
    rep.time = s.time;

    const VecField2D& u = s.u_bar;
    const VecField2D& ut = s.u_bar_t;
    const VecField2D utt = limit.rhs_linearized(u, ut);

    // d/dt of the whole stack: the same construction applied to (u_t, u_tt),
    // including its own divergence corrector
    const LayerProfileSet prof_t_b =
        build_layer_profiles(ut, utt, geo, sp, LayerSide::Bottom, s.axis, s.p2_sign);
    const LayerProfileSet prof_t_t =
        build_layer_profiles(ut, utt, geo, sp, LayerSide::Top, s.axis, s.p2_sign);
    const UncorrectedField unc_t =
        assemble_uncorrected(ut, prof_t_b, prof_t_t, geo, sp, s.chi, s.zgrid);
    const Corrector cor_t = divergence_corrector(unc_t.defect, geo, sp);

    // vertical derivatives of the value stack, and the corrector internals
    const StackDerivatives sd = stack_derivatives(s.bottom, s.top, geo, s.chi, s.zgrid);
    const Corrector cor = divergence_corrector(s.defect, geo, sp);

    // hoisted coefficient planes
    Field2D lap_b(g), one_p(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        lap_b[k] = geo.bxx[k] + geo.byy[k];
        one_p[k] = 1.0 + geo.bx[k] * geo.bx[k] + geo.by[k] * geo.by[k];
    }
    Field2D p_int(g);
    for (std::size_t k = 0; k < g.size(); ++k) p_int[k] = s.p0_int[k] + eps * s.p_bar[k];
    const Field2D pix = sp.dx(p_int), piy = sp.dy(p_int);
    const Field2D phix = sp.dx(cor.phi), phiy = sp.dy(cor.phi);
    Field2D slope_phi(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        slope_phi[k] = geo.bx[k] * phix[k] + geo.by[k] * phiy[k];

    const InteriorOrder1& in0 = s.bottom.interior;
    const InteriorOrder1& in_t = prof_t_b.interior;

    using Planes = std::array<Field2D, 3>;
    auto zero_planes = [&]() { return Planes{Field2D(g), Field2D(g), Field2D(g)}; };

    // Cartesian Laplacian on a zeta-plane:
    //   lap f = lap_h f - (lap B) df - 2 grad B . grad_h(df) + (1 + |grad B|^2) d2f
    auto lap3d = [&](const Field2D& val, const Field2D& dval, const Field2D& d2val) {
        Field2D out = sp.laplacian(val);
        const Field2D ddx = sp.dx(dval), ddy = sp.dy(dval);
        for (std::size_t k = 0; k < g.size(); ++k)
            out[k] += -lap_b[k] * dval[k] - 2.0 * (geo.bx[k] * ddx[k] + geo.by[k] * ddy[k]) +
                      one_p[k] * d2val[k];
        return out;
    };

    // (U.grad)U on a zeta-plane; the vertical transport joins as
    // W = U3 - grad B . U_h so that the layer-scale chain terms cancel before
    // any large numbers appear. Products are truncated like the limit solver's.
    auto advect = [&](const Planes& val, const Planes& dval) {
        Field2D W(g);
        for (std::size_t k = 0; k < g.size(); ++k)
            W[k] = val[2][k] - geo.bx[k] * val[0][k] - geo.by[k] * val[1][k];
        Planes out = zero_planes();
        for (int i = 0; i < 3; ++i) {
            const Field2D fx = sp.dx(val[i]), fy = sp.dy(val[i]);
            Field2D a(g);
            for (std::size_t k = 0; k < g.size(); ++k)
                a[k] = val[0][k] * fx[k] + val[1][k] * fy[k] + W[k] * dval[i][k];
            out[i] = sp.dealias(a);
        }
        return out;
    };

    // (1/eps) grad P with the terrain chain rule; dP may be absent (interior
    // pressure is zeta-independent)
    auto pressure_force = [&](const Field2D& px, const Field2D& py, const Field2D* dP) {
        Planes f = zero_planes();
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double d = dP ? (*dP)[k] : 0.0;
            f[0][k] = px[k] - geo.bx[k] * d;
            f[1][k] = py[k] - geo.by[k] * d;
            f[2][k] = d;
        }
        return f;
    };

    // (1/eps)(R U + pressure force): the singular share of one group
    auto singular_terms = [&](const Planes& val, const Planes& pforce) {
        Planes out = zero_planes();
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < g.size(); ++k) {
                const double rot = (i == 0) ? -val[1][k] : (i == 1) ? val[0][k] : 0.0;
                out[i][k] = inv_eps * (rot + pforce[i][k]);
            }
        return out;
    };

    // t - nu eps lap: the non-singular linear share
    auto smooth_terms = [&](const Planes& val, const Planes& dval, const Planes& d2val,
                            const Planes& tval) {
        Planes out = zero_planes();
        for (int i = 0; i < 3; ++i) {
            const Field2D lap = lap3d(val[i], dval[i], d2val[i]);
            for (std::size_t k = 0; k < g.size(); ++k)
                out[i][k] = tval[i][k] - nueps * lap[k];
        }
        return out;
    };

    const double dA = g.dx() * g.dy();
    double acc_tot = 0.0, acc_h = 0.0, acc_3 = 0.0;
    double acc_int = 0.0, acc_lay = 0.0, acc_adv = 0.0, acc_cor = 0.0, acc_diff = 0.0;

    for (int q = 0; q < s.zgrid.size(); ++q) {
        const double zeta = s.zgrid.nodes[q];
        const double w = s.zgrid.weights[q];
        const double eta = corrector_bump(zeta);
        const double etap = corrector_bump_deriv(zeta);
        const double etapp = corrector_bump_deriv2(zeta);

        // ---- value planes: total, interior extension, corrector, layer ----
        Planes T{s.u1.plane(q), s.u2.plane(q), s.u3.plane(q)};
        Planes V{s.v1.plane(q), s.v2.plane(q), s.v3.plane(q)};
        Planes I = zero_planes();
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double dl = geo.delta[k];
            I[0][k] = u.x[k] + dl * in0.uh.x[k];
            I[1][k] = u.y[k] + dl * in0.uh.y[k];
            I[2][k] = geo.bx[k] * u.x[k] + geo.by[k] * u.y[k] +
                      dl * (in0.u3_base[k] + (1.0 - zeta) * in0.u3_slope[k]);
        }
        Planes L = zero_planes();
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < g.size(); ++k) L[i][k] = T[i][k] - I[i][k] - V[i][k];

        // ---- d/dzeta planes ----
        const Field2D defp = s.defect.plane(q);
        Planes dV = zero_planes();
        for (std::size_t k = 0; k < g.size(); ++k) {
            dV[0][k] = etap * phix[k];
            dV[1][k] = etap * phiy[k];
            dV[2][k] = (defp[k] - eta * cor.g[k]) + etap * slope_phi[k];
        }
        Planes dI = zero_planes();
        for (std::size_t k = 0; k < g.size(); ++k) dI[2][k] = -geo.delta[k] * in0.u3_slope[k];
        Planes dL{sd.du1.plane(q), sd.du2.plane(q), sd.du3.plane(q)};
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < g.size(); ++k) dL[i][k] -= dI[i][k];
        Planes dT = zero_planes();
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < g.size(); ++k)
                dT[i][k] = dI[i][k] + dL[i][k] + dV[i][k];

        // ---- d2/dzeta2 planes (interior columns are affine: zero) ----
        Planes d2L{sd.d2u1.plane(q), sd.d2u2.plane(q), sd.d2u3.plane(q)};
        // d/dzeta of the defect, for the corrector's second derivative
        Field2D ddef(g);
        {
            const Field2D a = sp.dx(dL[0]), b = sp.dy(dL[1]);
            for (std::size_t k = 0; k < g.size(); ++k)
                ddef[k] = -(a[k] - geo.bx[k] * d2L[0][k] + b[k] - geo.by[k] * d2L[1][k] +
                            d2L[2][k]);
        }
        Planes d2V = zero_planes();
        for (std::size_t k = 0; k < g.size(); ++k) {
            d2V[0][k] = etapp * phix[k];
            d2V[1][k] = etapp * phiy[k];
            d2V[2][k] = (ddef[k] - etap * cor.g[k]) + etapp * slope_phi[k];
        }
        Planes d2T = zero_planes();
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < g.size(); ++k) d2T[i][k] = d2L[i][k] + d2V[i][k];

        // ---- time planes ----
        Planes Tt{unc_t.u1.plane(q), unc_t.u2.plane(q), unc_t.u3.plane(q)};
        Planes Vt{cor_t.v1.plane(q), cor_t.v2.plane(q), cor_t.v3.plane(q)};
        Planes It = zero_planes();
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double dl = geo.delta[k];
            It[0][k] = ut.x[k] + dl * in_t.uh.x[k];
            It[1][k] = ut.y[k] + dl * in_t.uh.y[k];
            It[2][k] = geo.bx[k] * ut.x[k] + geo.by[k] * ut.y[k] +
                       dl * (in_t.u3_base[k] + (1.0 - zeta) * in_t.u3_slope[k]);
        }
        Planes Lt = zero_planes();
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < g.size(); ++k) Lt[i][k] = Tt[i][k] - It[i][k];
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < g.size(); ++k) Tt[i][k] += Vt[i][k];

        // ---- pressure forces ----
        const Field2D Ptot = s.p.plane(q);
        const Field2D Play = sd.p_layer.plane(q);
        const Field2D dPlay = sd.dp_layer.plane(q);
        const Planes pf_tot = pressure_force(sp.dx(Ptot), sp.dy(Ptot), &dPlay);
        const Planes pf_int = pressure_force(pix, piy, nullptr);
        const Planes pf_lay = pressure_force(sp.dx(Play), sp.dy(Play), &dPlay);

        // ---- assemble the groups and the direct total ----
        const Planes advF = advect(T, dT);
        const Planes advI = advect(I, dI);
        const Planes singT = singular_terms(T, pf_tot);
        const Planes singI = singular_terms(I, pf_int);
        const Planes singL = singular_terms(L, pf_lay);
        // the corrector has no pressure share; its singular part is taken as
        // the exact complement so that ulp noise amplified by 1/eps cannot
        // masquerade as a split inconsistency
        Planes singV = zero_planes();
        for (int i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < g.size(); ++k)
                singV[i][k] = singT[i][k] - singI[i][k] - singL[i][k];
        const Planes linT = smooth_terms(T, dT, d2T, Tt);
        const Planes linI = smooth_terms(I, dI, zero_planes(), It);
        const Planes linL = smooth_terms(L, dL, d2L, Lt);
        const Planes linV = smooth_terms(V, dV, d2V, Vt);

        const double wq = w * dA;
        for (std::size_t k = 0; k < g.size(); ++k) {
            for (int i = 0; i < 3; ++i) {
                const double rho = linT[i][k] + singT[i][k] + advF[i][k];
                const double gi = linI[i][k] + singI[i][k] + advI[i][k];
                const double gl = linL[i][k] + singL[i][k];
                const double gc = linV[i][k] + singV[i][k];
                const double ga = advF[i][k] - advI[i][k];
                const double diff = rho - (gi + gl + gc + ga);

                acc_tot += wq * rho * rho;
                (i < 2 ? acc_h : acc_3) += wq * rho * rho;
                acc_int += wq * gi * gi;
                acc_lay += wq * gl * gl;
                acc_adv += wq * ga * ga;
                acc_cor += wq * gc * gc;
                acc_diff += wq * diff * diff;
            }
        }
    }

    rep.total_l2 = std::sqrt(acc_tot);
    rep.rho_h_l2 = std::sqrt(acc_h);
    rep.rho3_l2 = std::sqrt(acc_3);
    rep.interior_l2 = std::sqrt(acc_int);
    rep.layer_l2 = std::sqrt(acc_lay);
    rep.advection_l2 = std::sqrt(acc_adv);
    rep.corrector_l2 = std::sqrt(acc_cor);
    rep.split_consistency = (rep.total_l2 > 0.0) ? std::sqrt(acc_diff) / rep.total_l2 : 0.0;

    // the singular 1/eps parts must have cancelled; an order-1/eps total means
    // a broken construction, not a small remainder
    const double uscale = l2_norm(u);
    if (uscale > 0.0 && rep.total_l2 * eps > 0.01 * uscale)
        throw std::runtime_error(
            "residual_rho: total " + std::to_string(rep.total_l2) +
            " is order 1/eps at eps = " + std::to_string(eps) +
            "; the construction is broken (largest group: " + std::string(rep.largest_group()) +
            ")");
    return rep;
}

// ======================================================================
// Vertical transport terms
// ======================================================================

VerticalTermNorms vertical_term_norms(const LimitSolver& limit) {
    const GeometryBundle& geo = limit.geometry();
    const Grid2D& g = geo.grid;
    const SpectralWorkspace sp(g);
    const VecField2D& u = limit.velocity();
    const VecField2D ut = limit.rhs(u);

    VerticalTermNorms out;
    Field2D f(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        f[k] = geo.bx[k] * ut.x[k] + geo.by[k] * ut.y[k];
    out.dt_u3 = l2_norm(f);

    for (std::size_t k = 0; k < g.size(); ++k)
        f[k] = geo.bxx[k] * u.x[k] * u.x[k] + 2.0 * geo.bxy[k] * u.x[k] * u.y[k] +
               geo.byy[k] * u.y[k] * u.y[k];
    out.hess_quad = l2_norm(f);

    const Field2D u1x = sp.dx(u.x), u1y = sp.dy(u.x);
    const Field2D u2x = sp.dx(u.y), u2y = sp.dy(u.y);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double a1 = u.x[k] * u1x[k] + u.y[k] * u1y[k];
        const double a2 = u.x[k] * u2x[k] + u.y[k] * u2y[k];
        f[k] = geo.bx[k] * a1 + geo.by[k] * a2;
    }
    out.slope_adv = l2_norm(f);

    double sup_grad = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        sup_grad = std::max(sup_grad,
                            std::sqrt(geo.bx[k] * geo.bx[k] + geo.by[k] * geo.by[k]));
    out.bound = sup_grad * (linf_norm(u) + 2.0 * std::sqrt(geo.nu)) * l2_norm(sp.curl(u));
    return out;
}

// ======================================================================
// Epsilon sweep
// ======================================================================

std::string SweepTable::csv() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "eps,distance,rho,div_residual,boundary_residual\n";
    for (const SweepRow& r : rows)
        os << r.eps << "," << r.distance << "," << r.rho << "," << r.div_residual << ","
           << r.boundary_residual << "\n";
    return os.str();
}

std::string SweepTable::summary() const {
    std::ostringstream os;
    os << std::setprecision(6);
    os << "epsilon sweep (" << rows.size() << " rows, "
       << (complete ? "complete" : "INCOMPLETE: " + error) << ")\n";
    for (const SweepRow& r : rows)
        os << "  eps " << std::setw(10) << r.eps << "  distance " << std::setw(12) << r.distance
           << "  rho " << std::setw(12) << r.rho << "  div " << std::setw(12) << r.div_residual
           << "  wall " << std::setw(12) << r.boundary_residual << "\n";
    os << "  distance slope " << slope_distance << " +- " << slope_distance_se << "\n"
       << "  rho slope      " << slope_rho << " +- " << slope_rho_se << "\n";
    return os.str();
}

SweepTable convergence_sweep(const SweepScenario& sc, const std::vector<double>& eps_list) {
    if (eps_list.size() < 3)
        throw std::invalid_argument("convergence_sweep: need at least 3 epsilon values");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw std::invalid_argument("convergence_sweep: epsilon values must be strictly "
                                        "decreasing");
    if (!(eps_list.front() >= 10.0 * eps_list.back() * (1.0 - 1e-12)))
        throw std::invalid_argument("convergence_sweep: epsilon values must span at least one "
                                    "decade");

    const Grid2D g(sc.n, sc.n, sc.lx, sc.ly);
    const SurfaceField b = build_surface(g, sc.surface);

    SweepTable table;
    table.complete = true;
    for (double eps : eps_list) {
        try {
            const GeometryBundle geo = derive_geometry(b, sc.nu, eps);
            LimitSolver solver(geo);
            solver.set_initial(sc.data);
            const ApproxSolution s = assemble_approx(solver, sc.assembly);
            const ResidualReport rep = residual_rho(s, solver);

            SweepRow row;
            row.eps = eps;
            row.distance = approx_minus_limit_l2(s);
            row.rho = rep.total_l2;
            row.div_residual = s.info.defect_l2 * s.info.closure_l2;
            double wall = 0.0;
            for (int q : {0, s.zgrid.size() - 1}) {
                wall = std::max(wall, s.u1.plane(q).max_abs());
                wall = std::max(wall, s.u2.plane(q).max_abs());
                wall = std::max(wall, s.u3.plane(q).max_abs());
            }
            row.boundary_residual = wall;
            table.rows.push_back(row);
        } catch (const std::exception& e) {
            table.complete = false;
            table.error = e.what();
            break;
        }
    }

    std::vector<double> xs, dist, rho;
    for (const SweepRow& r : table.rows) {
        xs.push_back(r.eps);
        dist.push_back(r.distance);
        rho.push_back(r.rho);
    }
    loglog_fit(xs, dist, table.slope_distance, table.slope_distance_se);
    loglog_fit(xs, rho, table.slope_rho, table.slope_rho_se);
    return table;
}

// ======================================================================
// Decay
// ======================================================================

std::string DecayAssessment::summary() const {
    std::ostringstream os;
    os << std::setprecision(6);
    os << "decay over horizon " << horizon << " (dt " << dt_used << ", "
       << trajectory.size() << " samples)\n"
       << fits.summary() << "  late gradient rate " << grad_late.rate << " vs bound "
       << fits.ref_gradient << "\n"
       << "  L2 rate bound:   " << (l2_ok ? "ok" : "FAIL") << "\n"
       << "  gradient bound:  " << (grad_ok ? "ok" : "FAIL") << "\n";
    if (flat)
        os << "  flat energy rate " << fits.energy_rate << " vs exact " << flat_expected << ": "
           << (flat_ok ? "ok" : "FAIL") << "\n";
    return os.str();
}

DecayAssessment decay_check(const GeometryBundle& geo, const InitialData& data, double horizon,
                            int n_samples) {
    const double ref_slow = std::sqrt(2.0 * geo.nu) / 8.0;
    if (!(horizon * ref_slow >= 3.0 * (1.0 - 1e-12)))
        throw std::invalid_argument(
            "decay_check: horizon " + std::to_string(horizon) + " spans fewer than 3 e-folding "
            "times of the slowest guaranteed rate; need at least " +
            std::to_string(3.0 / ref_slow));
    if (n_samples < 15)
        throw std::invalid_argument("decay_check: need at least 15 samples for the fits");

    LimitSolver solver(geo);
    solver.set_initial(data);

    DecayAssessment out;
    out.horizon = horizon;

    const double sample_dt = horizon / n_samples;
    const double dt0 = solver.cfl_dt(0.5);
    const int m = std::isfinite(dt0) ? std::max(1, static_cast<int>(std::ceil(sample_dt / dt0)))
                                     : 1;
    out.dt_used = sample_dt / m;

    out.trajectory.push_back(solver.sample());
    for (int i = 0; i < n_samples; ++i) {
        for (int j = 0; j < m; ++j) solver.step(out.dt_used);
        out.trajectory.push_back(solver.sample());
    }

    out.fits = decay_diagnostics(out.trajectory, geo.nu);
    const std::vector<NormSample> late(out.trajectory.begin() + out.trajectory.size() / 3,
                                       out.trajectory.end());
    out.grad_late = decay_diagnostics(late, geo.nu).linf_grad_u;

    double slope = 0.0;
    for (std::size_t k = 0; k < geo.grid.size(); ++k)
        slope = std::max({slope, std::abs(geo.bx[k]), std::abs(geo.by[k])});
    out.flat = (slope == 0.0);
    out.flat_expected = std::sqrt(2.0 * geo.nu);

    out.l2_ok = out.fits.l2_u.fitted &&
                out.fits.l2_u.rate >= out.fit_tolerance * out.fits.ref_conservative;
    out.grad_ok =
        out.grad_late.fitted && out.grad_late.rate >= out.fit_tolerance * out.fits.ref_gradient;
    out.flat_ok = !out.flat || (out.fits.l2_u.fitted &&
                                std::abs(out.fits.energy_rate - out.flat_expected) <=
                                    0.01 * out.flat_expected);
    return out;
}

}  // namespace ekman
