/// @file verify.hpp
/// @brief Quantitative checks on the assembled 3D field: the strong-form
///        momentum residual with an exact term-group breakdown, norms of the
///        slaved vertical transport terms, epsilon convergence sweeps, and
///        decay-rate assessments of the limit flow.

#pragma once

#include <string>
#include <vector>

#include "ekman/assembler.hpp"
#include "ekman/limit2d.hpp"
#include "ekman/surface.hpp"

namespace ekman {

// ----------------------------------------------------------------------
// Strong-form residual
// ----------------------------------------------------------------------

/// Slab L2 norms of
///
///   rho = d/dt U - nu eps lap U + (U.grad)U + (1/eps) R U + (1/eps) grad P
///
/// evaluated on the terrain-following grid, plus an exact field-level
/// partition of rho into four groups:
///   interior   - linear terms on the interior extension (limit flow, drift,
///                slaved vertical columns, interior pressure) plus its own
///                self-advection; carries the vertical transport leftovers
///   layer      - linear terms on the blended wall stacks and layer pressure
///                tails; the 1/eps singular parts cancel inside this group
///   advection  - every advection product with at least one layer or
///                corrector factor
///   corrector  - linear terms on the divergence corrector
/// The groups sum to the independently evaluated total; split_consistency
/// reports the relative fp discrepancy of that identity.
struct ResidualReport {
    double total_l2 = 0.0;
    double rho_h_l2 = 0.0;  ///< horizontal components only
    double rho3_l2 = 0.0;   ///< vertical component only

    double interior_l2 = 0.0;
    double layer_l2 = 0.0;
    double advection_l2 = 0.0;
    double corrector_l2 = 0.0;
    double split_consistency = 0.0;  ///< ||sum of groups - total|| / ||total||

    double eps = 0.0, time = 0.0;

    const char* largest_group() const;
    std::string summary() const;
};

/// Evaluates the residual of an assembled solution. The limit solver must be
/// at the same state the solution was assembled from; all time derivatives
/// are formed analytically (the profile constructions are jointly linear in
/// (u, du/dt), so d/dt of the stack is the same construction applied to
/// (du/dt, d2u/dt2)). Throws if the evaluated total is order 1/eps, naming
/// the largest group.
ResidualReport residual_rho(const ApproxSolution& s, const LimitSolver& limit);

// ----------------------------------------------------------------------
// Vertical transport terms
// ----------------------------------------------------------------------

/// L2 norms of the three source terms of the slaved vertical component
/// u3 = grad B . u_h, together with the reference bound
/// sup|grad B| (||u||_Linf + 2 sqrt(nu)) ||curl u||_L2 they are measured
/// against. All three vanish over a flat bottom.
struct VerticalTermNorms {
    double dt_u3 = 0.0;      ///< || grad B . du/dt ||
    double hess_quad = 0.0;  ///< || u^T Hess(B) u ||
    double slope_adv = 0.0;  ///< || grad B . (u.grad)u ||
    double bound = 0.0;
};

VerticalTermNorms vertical_term_norms(const LimitSolver& limit);

// ----------------------------------------------------------------------
// Epsilon sweep
// ----------------------------------------------------------------------

struct SweepRow {
    double eps = 0.0;
    double distance = 0.0;           ///< || U_app - limit field ||_L2 over the slab
    double rho = 0.0;                ///< residual total
    double div_residual = 0.0;       ///< post-corrector incompressibility defect
    double boundary_residual = 0.0;  ///< largest wall-trace velocity value
};

/// Log-log convergence table over a decreasing epsilon ladder. Slopes are
/// unweighted least squares in log10-log10 with their standard errors.
struct SweepTable {
    std::vector<SweepRow> rows;
    double slope_distance = 0.0, slope_distance_se = 0.0;
    double slope_rho = 0.0, slope_rho_se = 0.0;
    bool complete = false;
    std::string error;  ///< first failure when incomplete

    std::string csv() const;
    std::string summary() const;
};

/// Fixed scenario shared by every row of a sweep.
struct SweepScenario {
    int n = 64;
    double lx = 6.283185307179586476925286766559, ly = 6.283185307179586476925286766559;
    SurfaceSpec surface = SurfaceSpec::flat(0.0);
    double nu = 0.05;
    InitialData data = InitialData::taylor_green(0.5);
    AssemblyOptions assembly{};
};

/// Assembles and measures one row per epsilon value (same surface, data and
/// grids throughout). Requires at least 3 strictly decreasing values spanning
/// at least a decade. A row failure stops the sweep; the partial table is
/// returned with complete = false and the failure message recorded.
SweepTable convergence_sweep(const SweepScenario& sc, const std::vector<double>& eps_list);

// ----------------------------------------------------------------------
// Decay rates
// ----------------------------------------------------------------------

/// Trajectory decay fits against the guaranteed lower bounds: the L2 rate is
/// compared with sqrt(2 nu)/8, the late-time gradient rate with sqrt(nu/2);
/// over a flat bottom the energy (squared-norm) rate must match sqrt(2 nu)
/// exactly (1%), since the damping reduces there to -sqrt(nu/2) u pointwise.
struct DecayAssessment {
    std::vector<NormSample> trajectory;
    DecayReport fits;    ///< whole-horizon fits of all channels
    DecayFit grad_late;  ///< gradient fit excluding the first third (transient)
    double horizon = 0.0, dt_used = 0.0;
    bool flat = false;            ///< geometry has no slope
    double flat_expected = 0.0;   ///< sqrt(2 nu), exact flat energy rate
    double fit_tolerance = 0.9;   ///< fitted rate must reach tolerance x bound
    bool l2_ok = false, grad_ok = false, flat_ok = false;

    std::string summary() const;
};

/// Integrates the limit flow from the given data over the horizon and fits
/// the decay rates. The horizon must span at least 3 e-folding times of the
/// slowest guaranteed rate sqrt(2 nu)/8 (throws otherwise).
DecayAssessment decay_check(const GeometryBundle& geo, const InitialData& data, double horizon,
                            int n_samples = 60);

}  // namespace ekman
