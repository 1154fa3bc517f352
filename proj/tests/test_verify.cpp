/// @file test_verify.cpp
/// @brief Residual evaluation, vertical transport norms, epsilon sweeps and
///        decay assessments.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "ekman/cutoff.hpp"
#include "ekman/verify.hpp"

using namespace ekman;
using doctest::Contains;

namespace {

constexpr double kNu = 0.05;
constexpr double kTau = 6.283185307179586476925286766559;

GeometryBundle make_geo(const Grid2D& g, const SurfaceSpec& s, double eps) {
    return derive_geometry(build_surface(g, s), kNu, eps);
}

double plane_linf(const Field2D& f) { return f.max_abs(); }

/// Nonuniform 3-point first derivative at the middle node.
double fd1(double fm, double f0, double fp, double h1, double h2) {
    return (h1 * h1 * fp - h2 * h2 * fm - (h1 * h1 - h2 * h2) * f0) /
           (h1 * h2 * (h1 + h2));
}

/// Nonuniform 3-point second derivative at the middle node.
double fd2(double fm, double f0, double fp, double h1, double h2) {
    return 2.0 * (h1 * fp + h2 * fm - (h1 + h2) * f0) / (h1 * h2 * (h1 + h2));
}

}  // namespace

// ======================================================================
// Residual
// ======================================================================

TEST_CASE("residual of the rest state is exactly zero") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::taylor_green(0.0));
    ApproxSolution s = assemble_approx(solver);
    ResidualReport rep = residual_rho(s, solver);
    CHECK(rep.total_l2 == 0.0);
    CHECK(rep.rho_h_l2 == 0.0);
    CHECK(rep.rho3_l2 == 0.0);
    CHECK(rep.interior_l2 == 0.0);
    CHECK(rep.layer_l2 == 0.0);
    CHECK(rep.advection_l2 == 0.0);
    CHECK(rep.corrector_l2 == 0.0);
    CHECK(rep.split_consistency == 0.0);
}

TEST_CASE("residual report structure on a sloped surface") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::band_random(0.4, 11));
    ApproxSolution s = assemble_approx(solver);
    ResidualReport rep = residual_rho(s, solver);

    // bounded total, far from the 1/eps scale the guard watches for
    const double uscale = l2_norm(s.u_bar);
    CHECK(rep.total_l2 > 0.0);
    CHECK(rep.total_l2 < uscale);

    // every group participates and the partition closes at fp level
    CHECK(rep.interior_l2 > 0.0);
    CHECK(rep.layer_l2 > 0.0);
    CHECK(rep.advection_l2 > 0.0);
    CHECK(rep.corrector_l2 > 0.0);
    CHECK(rep.split_consistency < 1e-10);

    // component split is itself a partition of the total
    const double comp = rep.rho_h_l2 * rep.rho_h_l2 + rep.rho3_l2 * rep.rho3_l2;
    CHECK(comp == doctest::Approx(rep.total_l2 * rep.total_l2).epsilon(1e-12));

    // the slaved vertical transport dominates this configuration
    CHECK(std::string(rep.largest_group()) == "interior");
    CHECK(rep.eps == 1e-3);
    CHECK(rep.time == 0.0);
    CHECK(rep.summary().find("residual") != std::string::npos);

    // the stored pressure stack is exactly interior plus blended layer tails
    StackDerivatives sd = stack_derivatives(s.bottom, s.top, geo, s.chi, s.zgrid);
    Field2D p_int(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        p_int[k] = s.p0_int[k] + s.eps * s.p_bar[k];
    double worst = 0.0, scale = 0.0;
    for (int q = 0; q < s.zgrid.size(); ++q) {
        const Field2D stored = s.p.plane(q);
        const Field2D tail = sd.p_layer.plane(q);
        for (std::size_t k = 0; k < g.size(); ++k) {
            worst = std::max(worst, std::abs(stored[k] - (p_int[k] + tail[k])));
            scale = std::max(scale, std::abs(stored[k]));
        }
    }
    CHECK(worst <= 1e-12 * scale);

    MESSAGE("total ", rep.total_l2, " interior ", rep.interior_l2, " layer ", rep.layer_l2,
            " advection ", rep.advection_l2, " corrector ", rep.corrector_l2, " split ",
            rep.split_consistency);
}

TEST_CASE("flat bottom: interior group shrinks linearly in eps, total like sqrt(eps)") {
    Grid2D g(32, 32, kTau, kTau);
    const SurfaceSpec flat = SurfaceSpec::flat(0.0);
    double total[2] = {0, 0}, interior[2] = {0, 0};
    const double eps_vals[2] = {1e-2, 1e-3};
    for (int i = 0; i < 2; ++i) {
        GeometryBundle geo = make_geo(g, flat, eps_vals[i]);
        LimitSolver solver(geo);
        solver.set_initial(InitialData::taylor_green(0.5));
        ApproxSolution s = assemble_approx(solver);
        ResidualReport rep = residual_rho(s, solver);
        total[i] = rep.total_l2;
        interior[i] = rep.interior_l2;
        CHECK(rep.split_consistency < 1e-10);
        // flat: the largest contributions are the layer-driven ones
        CHECK(rep.interior_l2 < rep.layer_l2);
    }
    // with no slope the interior group is pure nu*eps diffusion remainder
    CHECK(interior[0] / interior[1] == doctest::Approx(10.0).epsilon(0.05));
    // total is dominated by sqrt(layer thickness) terms
    const double slope = std::log10(total[0] / total[1]);
    CHECK(slope > 0.45);
    CHECK(slope < 0.55);
}

TEST_CASE("residual preconditions reject mismatched states") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::band_random(0.4, 11));
    ApproxSolution s = assemble_approx(solver);

    LimitSolver moved(geo);
    moved.set_initial(InitialData::band_random(0.4, 11));
    moved.step(1e-3);
    CHECK_THROWS_WITH_AS(residual_rho(s, moved), Contains("assembled at t"),
                         std::invalid_argument);

    LimitSolver other(geo);
    other.set_initial(InitialData::taylor_green(0.3));
    CHECK_THROWS_WITH_AS(residual_rho(s, other), Contains("state differs"),
                         std::invalid_argument);

    Grid2D g2(16, 16, kTau, kTau);
    GeometryBundle geo2 = make_geo(g2, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver small(geo2);
    small.set_initial(InitialData::band_random(0.4, 11));
    CHECK_THROWS_WITH_AS(residual_rho(s, small), Contains("grids differ"),
                         std::invalid_argument);
}

TEST_CASE("repeated residual evaluation is bitwise identical") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::band_random(0.4, 11));
    ApproxSolution s = assemble_approx(solver);
    ResidualReport a = residual_rho(s, solver);
    ResidualReport b = residual_rho(s, solver);
    CHECK(a.total_l2 == b.total_l2);
    CHECK(a.rho_h_l2 == b.rho_h_l2);
    CHECK(a.rho3_l2 == b.rho3_l2);
    CHECK(a.interior_l2 == b.interior_l2);
    CHECK(a.layer_l2 == b.layer_l2);
    CHECK(a.advection_l2 == b.advection_l2);
    CHECK(a.corrector_l2 == b.corrector_l2);
    CHECK(a.split_consistency == b.split_consistency);
}

TEST_CASE("a broken pressure stack is flagged as order 1/eps") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::flat(0.0), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::taylor_green(0.5));
    ApproxSolution s = assemble_approx(solver);
    for (double& v : s.p.v) v *= 2.0;
    CHECK_THROWS_WITH_AS(residual_rho(s, solver), Contains("order 1/eps"), std::runtime_error);
}

TEST_CASE("pressure tail time-sign choice is numerically immaterial") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::band_random(0.4, 11));
    AssemblyOptions plus, minus;
    minus.p2_sign = PressureTailTimeSign::Minus;
    ResidualReport rp = residual_rho(assemble_approx(solver, plus), solver);
    ResidualReport rm = residual_rho(assemble_approx(solver, minus), solver);
    MESSAGE("rho with + tail ", rp.total_l2, ", with - tail ", rm.total_l2);
    CHECK(std::abs(rp.total_l2 - rm.total_l2) < 1e-3 * rp.total_l2);
}

// ======================================================================
// Derivative plumbing
// ======================================================================

TEST_CASE("stack derivatives match finite differences on a clustered probe grid") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::band_random(0.4, 11));
    const SpectralWorkspace sp(g);
    const VecField2D& u = solver.velocity();
    const VecField2D ut = solver.rhs(u);
    const CutoffProfile chi = make_cutoff(3);
    const LayerProfileSet bot =
        build_layer_profiles(u, ut, geo, sp, LayerSide::Bottom, StretchedAxis{});
    const LayerProfileSet top =
        build_layer_profiles(u, ut, geo, sp, LayerSide::Top, StretchedAxis{});

    // triples of nodes around probe heights: tiny steps inside the wall
    // layers, wider ones across the blend region
    const double hl = 1e-6, hb = 1e-3;
    const std::vector<std::pair<double, double>> probes = {
        {3.5e-3, hl}, {2.1e-2, hl}, {0.8, hb}, {1.0, hb}, {1.3, hb},
        {2.0 - 2.1e-2, hl}, {2.0 - 3.5e-3, hl}};
    ZetaGrid zg;
    for (auto [z, h] : probes) {
        zg.nodes.push_back(z - h);
        zg.nodes.push_back(z);
        zg.nodes.push_back(z + h);
    }
    zg.weights.assign(zg.nodes.size(), 0.0);

    const UncorrectedField unc = assemble_uncorrected(u, bot, top, geo, sp, chi, zg);
    const StackDerivatives sd = stack_derivatives(bot, top, geo, chi, zg);

    for (std::size_t p = 0; p < probes.size(); ++p) {
        const int q = static_cast<int>(3 * p + 1);
        const double h = probes[p].second;
        const Field3D* vals[3] = {&unc.u1, &unc.u2, &unc.u3};
        const Field3D* d1s[3] = {&sd.du1, &sd.du2, &sd.du3};
        const Field3D* d2s[3] = {&sd.d2u1, &sd.d2u2, &sd.d2u3};
        for (int i = 0; i < 3; ++i) {
            const Field2D fm = vals[i]->plane(q - 1), f0 = vals[i]->plane(q),
                          fp = vals[i]->plane(q + 1);
            const Field2D d1 = d1s[i]->plane(q), d2 = d2s[i]->plane(q);
            double e1 = 0.0, e2 = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) {
                e1 = std::max(e1, std::abs(fd1(fm[k], f0[k], fp[k], h, h) - d1[k]));
                e2 = std::max(e2, std::abs(fd2(fm[k], f0[k], fp[k], h, h) - d2[k]));
            }
            CHECK(e1 <= 1e-5 * plane_linf(d1) + 1e-9);
            CHECK(e2 <= 1e-4 * plane_linf(d2) + 1e-5);
        }
        // pressure tail derivative
        const Field2D pm = sd.p_layer.plane(q - 1), p0 = sd.p_layer.plane(q),
                      pp = sd.p_layer.plane(q + 1);
        const Field2D dp = sd.dp_layer.plane(q);
        double ep = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            ep = std::max(ep, std::abs(fd1(pm[k], p0[k], pp[k], h, h) - dp[k]));
        CHECK(ep <= 1e-5 * plane_linf(dp) + 1e-12);
    }
}

TEST_CASE("cutoff and corrector bump second derivatives match finite differences") {
    const double h = 1e-4;
    for (int order : {2, 3, 5}) {
        const CutoffProfile chi = make_cutoff(order);
        for (double z : {0.55, 0.7, 1.0, 1.2, 1.45}) {
            const double fd = (chi.value(z + h) - 2.0 * chi.value(z) + chi.value(z - h)) / (h * h);
            CHECK(std::abs(fd - chi.deriv2(z)) <= 1e-4 * std::max(1.0, std::abs(chi.deriv2(z))));
        }
        CHECK(chi.deriv2(0.4) == 0.0);
        CHECK(chi.deriv2(1.6) == 0.0);
    }
    for (double z : {0.3, 0.6, 1.0, 1.4, 1.7}) {
        const double fd = (corrector_bump(z + h) - 2.0 * corrector_bump(z) +
                           corrector_bump(z - h)) /
                          (h * h);
        CHECK(std::abs(fd - corrector_bump_deriv2(z)) <=
              1e-3 * std::max(1.0, std::abs(corrector_bump_deriv2(z))));
    }
    CHECK(corrector_bump_deriv2(0.2) == 0.0);
    CHECK(corrector_bump_deriv2(1.8) == 0.0);
}

TEST_CASE("analytic time derivative of the stack matches a central time difference") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::band_random(0.4, 11));
    const SpectralWorkspace sp(g);
    ApproxSolution s = assemble_approx(solver);

    const VecField2D& u = s.u_bar;
    const VecField2D& ut = s.u_bar_t;
    const VecField2D utt = solver.rhs_linearized(u, ut);

    // the construction is jointly linear in (u, du/dt), so d/dt of the stack
    // is the same construction applied to (du/dt, d2u/dt2)
    const LayerProfileSet bt =
        build_layer_profiles(ut, utt, geo, sp, LayerSide::Bottom, s.axis, s.p2_sign);
    const LayerProfileSet tt =
        build_layer_profiles(ut, utt, geo, sp, LayerSide::Top, s.axis, s.p2_sign);
    const UncorrectedField unc_t = assemble_uncorrected(ut, bt, tt, geo, sp, s.chi, s.zgrid);
    const Corrector cor_t = divergence_corrector(unc_t.defect, geo, sp);

    const double h = 1e-3;
    UncorrectedField shifted[2];
    Corrector cor_sh[2];
    for (int sgn = 0; sgn < 2; ++sgn) {
        const double sh = sgn == 0 ? h : -h;
        VecField2D up(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            up.x[k] = u.x[k] + sh * ut.x[k] + 0.5 * sh * sh * utt.x[k];
            up.y[k] = u.y[k] + sh * ut.y[k] + 0.5 * sh * sh * utt.y[k];
        }
        const VecField2D upt = solver.rhs(up);
        const LayerProfileSet b =
            build_layer_profiles(up, upt, geo, sp, LayerSide::Bottom, s.axis, s.p2_sign);
        const LayerProfileSet t =
            build_layer_profiles(up, upt, geo, sp, LayerSide::Top, s.axis, s.p2_sign);
        shifted[sgn] = assemble_uncorrected(up, b, t, geo, sp, s.chi, s.zgrid);
        cor_sh[sgn] = divergence_corrector(shifted[sgn].defect, geo, sp);
    }

    auto compare = [&](const Field3D& analytic, const Field3D& plus, const Field3D& minus,
                       double tol_rel) {
        double err = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < analytic.size(); ++k) {
            err = std::max(err, std::abs((plus.v[k] - minus.v[k]) / (2.0 * h) - analytic.v[k]));
            scale = std::max(scale, std::abs(analytic.v[k]));
        }
        CHECK(err <= tol_rel * scale + 1e-10);
    };
    compare(unc_t.u1, shifted[0].u1, shifted[1].u1, 1e-4);
    compare(unc_t.u2, shifted[0].u2, shifted[1].u2, 1e-4);
    compare(unc_t.u3, shifted[0].u3, shifted[1].u3, 1e-4);
    compare(unc_t.defect, shifted[0].defect, shifted[1].defect, 1e-3);
    compare(cor_t.v3, cor_sh[0].v3, cor_sh[1].v3, 1e-3);
}

// ======================================================================
// Vertical transport norms
// ======================================================================

TEST_CASE("vertical transport norms vanish identically over a flat bottom") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::flat(0.0), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::band_random(0.4, 11));
    VerticalTermNorms vt = vertical_term_norms(solver);
    CHECK(vt.dt_u3 == 0.0);
    CHECK(vt.hess_quad == 0.0);
    CHECK(vt.slope_adv == 0.0);
    CHECK(vt.bound == 0.0);
}

TEST_CASE("vertical transport norms obey the reference bound and decay envelope") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    LimitSolver solver(geo);
    solver.set_initial(InitialData::band_random(0.4, 11));
    VerticalTermNorms vt0 = vertical_term_norms(solver);
    CHECK(vt0.dt_u3 > 0.0);
    CHECK(vt0.hess_quad > 0.0);
    CHECK(vt0.slope_adv > 0.0);
    CHECK(vt0.dt_u3 <= vt0.bound);
    CHECK(vt0.hess_quad <= vt0.bound);
    CHECK(vt0.slope_adv <= vt0.bound);

    // integrate to t = 10 and compare with the slowest guaranteed envelope
    const double T = 10.0;
    const double dt = solver.cfl_dt(0.5);
    const int m = static_cast<int>(std::ceil(T / dt));
    for (int i = 0; i < m; ++i) solver.step(T / m);
    VerticalTermNorms vtT = vertical_term_norms(solver);
    const double envelope = std::exp(-std::sqrt(2.0 * kNu) / 8.0 * T);
    CHECK(vtT.dt_u3 <= vt0.dt_u3 * envelope);
    CHECK(vtT.hess_quad <= vt0.hess_quad * envelope);
    CHECK(vtT.slope_adv <= vt0.slope_adv * envelope);
}

// ======================================================================
// Sweeps
// ======================================================================

TEST_CASE("convergence sweep over a shallow eggcarton meets the rate targets") {
    SweepScenario sc;
    sc.n = 32;
    sc.surface = SurfaceSpec::eggcarton(1e-3, 1, 1);
    const std::vector<double> ladder = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    SweepTable t = convergence_sweep(sc, ladder);

    REQUIRE(t.complete);
    REQUIRE(t.rows.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(t.rows[i].eps == ladder[i]);
    for (std::size_t i = 0; i + 1 < 5; ++i) {
        CHECK(t.rows[i].distance > t.rows[i + 1].distance);
        CHECK(t.rows[i].rho > t.rows[i + 1].rho);
    }
    MESSAGE("distance slope ", t.slope_distance, " +- ", t.slope_distance_se, ", rho slope ",
            t.slope_rho, " +- ", t.slope_rho_se);
    CHECK(t.slope_distance > 0.4);
    CHECK(t.slope_distance < 0.6);
    CHECK(t.slope_rho >= 0.4);
    CHECK(t.slope_distance_se < 0.01);
    CHECK(t.slope_rho_se < 0.05);
    for (const SweepRow& r : t.rows) {
        CHECK(r.div_residual < 1e-12);
        CHECK(r.boundary_residual < 1e-12);
    }

    // csv: fixed header, one row per epsilon, full round-trip precision
    std::istringstream csv(t.csv());
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "eps,distance,rho,div_residual,boundary_residual");
    for (const SweepRow& r : t.rows) {
        REQUIRE(std::getline(csv, line));
        double v[5];
        char* pos = line.data();
        for (double& x : v) {
            x = std::strtod(pos, &pos);
            ++pos;  // separator
        }
        CHECK(v[0] == r.eps);
        CHECK(v[1] == r.distance);
        CHECK(v[2] == r.rho);
        CHECK(v[3] == r.div_residual);
        CHECK(v[4] == r.boundary_residual);
    }
    CHECK(t.summary().find("complete") != std::string::npos);

    // grid independence: doubling the vertical resolution moves neither slope
    SweepScenario fine = sc;
    fine.assembly.n_zeta = 192;
    SweepTable t2 = convergence_sweep(fine, ladder);
    REQUIRE(t2.complete);
    CHECK(std::abs(t2.slope_distance - t.slope_distance) < 0.02);
    CHECK(std::abs(t2.slope_rho - t.slope_rho) < 0.02);

    // read-only: a rerun reproduces the table bitwise
    CHECK(convergence_sweep(sc, ladder).csv() == t.csv());
}

TEST_CASE("sweep input validation") {
    SweepScenario sc;
    sc.n = 16;
    CHECK_THROWS_WITH_AS(convergence_sweep(sc, {1e-2, 1e-3}), Contains("at least 3"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(convergence_sweep(sc, {1e-2, 1e-2, 1e-3}),
                         Contains("strictly decreasing"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(convergence_sweep(sc, {1e-2, 5e-3, 2e-3}), Contains("decade"),
                         std::invalid_argument);
}

TEST_CASE("sweep aborts on a failing row and returns the partial table") {
    SweepScenario sc;
    sc.n = 16;
    SweepTable t = convergence_sweep(sc, {1e-2, 1e-3, 0.0});
    CHECK_FALSE(t.complete);
    CHECK(t.rows.size() == 2);
    CHECK(t.error.find("eps") != std::string::npos);
    CHECK(t.slope_distance == 0.0);  // too few rows for a fit
    CHECK(t.summary().find("INCOMPLETE") != std::string::npos);
    // the partial rows still serialize
    CHECK(t.csv().find("\n0.01,") != std::string::npos);
}

// ======================================================================
// Decay
// ======================================================================

TEST_CASE("decay check: flat energy rate is exact, sloped rates clear the bounds") {
    Grid2D g(32, 32, kTau, kTau);
    GeometryBundle flat_geo = make_geo(g, SurfaceSpec::flat(0.0), 1e-3);
    DecayAssessment flat = decay_check(flat_geo, InitialData::taylor_green(0.5), 80.0);
    CHECK(flat.flat);
    CHECK(flat.flat_expected == doctest::Approx(std::sqrt(2.0 * kNu)).epsilon(1e-15));
    CHECK(flat.l2_ok);
    CHECK(flat.grad_ok);
    CHECK(flat.flat_ok);
    CHECK(flat.trajectory.size() == 61);
    CHECK(flat.fits.energy_rate ==
          doctest::Approx(std::sqrt(2.0 * kNu)).epsilon(0.01));
    CHECK(flat.summary().find("ok") != std::string::npos);

    GeometryBundle egg_geo = make_geo(g, SurfaceSpec::eggcarton(0.05, 1, 1), 1e-3);
    DecayAssessment egg = decay_check(egg_geo, InitialData::band_random(0.4, 11), 80.0);
    CHECK_FALSE(egg.flat);
    CHECK(egg.l2_ok);
    CHECK(egg.grad_ok);
    CHECK(egg.flat_ok);  // vacuous off the flat case
    CHECK(egg.fits.l2_u.rate >= egg.fits.ref_conservative);
    CHECK(egg.grad_late.rate >= 0.9 * egg.fits.ref_gradient);

    CHECK_THROWS_WITH_AS(decay_check(flat_geo, InitialData::taylor_green(0.5), 40.0),
                         Contains("e-folding"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(decay_check(flat_geo, InitialData::taylor_green(0.5), 80.0, 5),
                         Contains("15"), std::invalid_argument);
}
