/// @file limit2d.hpp
/// @brief Integrator for the 2D damped-rotational limit flow on the periodic
///        box: velocity form, scalar-vorticity form, pressure recovery and
///        decay-rate diagnostics.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "ekman/geometry.hpp"
#include "ekman/spectral.hpp"

namespace ekman {

// ============================================================================
// Initial data
// ============================================================================

/// Recipe for the initial horizontal velocity. All presets are generated from
/// a stream function, so they are divergence-free to machine precision.
struct InitialData {
    enum class Preset { TaylorGreen, BandRandom, Bump };

    Preset preset = Preset::TaylorGreen;
    double amplitude = 1.0;        ///< peak |u| of the generated field
    double vorticity_scale = 0.0;  ///< if > 0, rescale so ||curl u||_L2 equals this
    unsigned long long seed = 1;   ///< BandRandom only
    double smoothness = 2.0;       ///< spectral falloff exponent (metadata, BandRandom shape)

    static InitialData taylor_green(double amp);
    static InitialData band_random(double amp, unsigned long long seed);
    static InitialData bump(double amp);
    std::string name() const;
};

// ============================================================================
// Trajectory diagnostics
// ============================================================================

struct NormSample {
    double t = 0.0;
    double l2_u = 0.0;         ///< ||u||_L2
    double l2_omega = 0.0;     ///< ||curl u||_L2
    double linf_u = 0.0;       ///< max pointwise |u|
    double linf_grad_u = 0.0;  ///< max pointwise Frobenius norm of grad u
};

struct DecayFit {
    double rate = 0.0;  ///< r in norm(t) ~ e^(-r t)
    bool fitted = false;
};

/// Least-squares decay rates of the four tracked norms plus the reference
/// rates they are compared against in reports.
struct DecayReport {
    DecayFit l2_u, l2_omega, linf_u, linf_grad_u;
    double energy_rate = 0.0;       ///< 2 x l2_u rate (decay of ||u||^2)
    double ref_conservative = 0.0;  ///< sqrt(2 nu)/8, guaranteed lower bound on the L2 rate
    double ref_gradient = 0.0;      ///< sqrt(nu/2), gradient-decay reference
    std::string summary() const;
};

/// Fits log-linear decay rates over the trajectory. Requires at least 10
/// samples; channels that touch zero (norm < 1e-14) are skipped.
DecayReport decay_diagnostics(const std::vector<NormSample>& traj, double nu);

/// Writes "t,L2_u,L2_omega,Linf_u,Linf_grad_u" rows (17 significant digits).
void write_norms_csv(const std::string& path, const std::vector<NormSample>& traj);

// ============================================================================
// Solver
// ============================================================================

/// State of the scalar-vorticity formulation. The box-mean velocity is not
/// visible to the curl, so it is carried alongside as a 2-component ODE.
struct VorticityState {
    Field2D omega;
    std::array<double, 2> mean_u{0.0, 0.0};
    double t = 0.0;
};

/// Pseudo-spectral RK4 integrator for the limit flow
///
///   du/dt + (u.grad)u + D(x,y) u + grad p = 0,   div u = 0,
///   D = sqrt(nu/(2 cos(gamma))) (H0 - cos(gamma)^-1 E1),
///
/// with all quadratic products truncated by the 2/3 rule so the state stays
/// band-limited and the advection term is an exact Galerkin product. The
/// geometry bundle must outlive the solver.
class LimitSolver {
public:
    explicit LimitSolver(const GeometryBundle& geo);

    const GeometryBundle& geometry() const { return *geo_; }
    const Grid2D& grid() const { return geo_->grid; }
    double nu() const { return geo_->nu; }

    // --- state -------------------------------------------------------------
    const VecField2D& velocity() const { return u_; }
    double time() const { return t_; }
    void set_time(double t) { t_ = t; }
    /// Installs a velocity field after Leray projection and 2/3 truncation.
    void set_velocity(const VecField2D& u);
    /// Builds the preset, applies the optional vorticity rescaling, installs.
    void set_initial(const InitialData& data);
    double initial_vorticity_norm() const { return initial_omega_norm_; }

    // --- velocity-form operators --------------------------------------------
    /// Momentum tendency -P[(u.grad)u + D u]; band-limited and exactly
    /// divergence-free by construction. Throws on non-finite values after
    /// dumping a diagnostic snapshot.
    VecField2D rhs(const VecField2D& u) const;
    /// Directional derivative of rhs at u in direction v; used to form second
    /// time derivatives analytically.
    VecField2D rhs_linearized(const VecField2D& u, const VecField2D& v) const;
    /// The three momentum terms with adv + damp + grad_p == -rhs exactly as
    /// computed (advection and damping are 2/3-truncated, p solves the
    /// compatibility Poisson problem).
    void momentum_terms(const VecField2D& u, VecField2D& adv, VecField2D& damp,
                        VecField2D& grad_p) const;
    /// Limit pressure p (zero mean) and the leading interior pressure
    /// p0 = lap^-1 curl u.
    void pressure(const VecField2D& u, Field2D& p_out, Field2D& p0_out) const;
    /// Slaved vertical component grad B . u_h.
    Field2D u3(const VecField2D& u) const;

    // --- time stepping -------------------------------------------------------
    /// Largest advectively stable RK4 step for the current state (inf if at rest).
    double cfl_dt(double safety = 0.9) const;
    /// One RK4 step; throws naming the required dt if the CFL bound is violated.
    void step(double dt);

    // --- vorticity form ------------------------------------------------------
    Field2D vorticity(const VecField2D& u) const;
    /// Biot-Savart inversion; omega must be mean-free (throws otherwise).
    /// The returned velocity has zero box mean.
    VecField2D velocity_from_vorticity(const Field2D& omega) const;
    VorticityState make_vorticity_state(const VecField2D& u, double t) const;
    VecField2D velocity_of(const VorticityState& s) const;
    /// Curl of the momentum tendency: advection, direct damping, a curvature
    /// source and a slope source. Mean-free by construction.
    Field2D vorticity_rhs(const Field2D& omega, const std::array<double, 2>& mean_u) const;
    /// Tendency of the box-mean velocity, -mean(D u).
    std::array<double, 2> mean_velocity_rhs(const VecField2D& u) const;
    /// RK4 step of the (omega, mean) system, mirroring step().
    void step_vorticity(VorticityState& s, double dt) const;

    // --- energy accounting ---------------------------------------------------
    /// Quadrature of u^T (rotation part of D) u; analytically zero.
    double rotation_energy(const VecField2D& u) const;
    /// Quadrature of u^T D u >= 0 (the dissipation functional).
    double damping_energy(const VecField2D& u) const;

    NormSample sample() const;
    bool admissible() const { return admissible_; }

private:
    VecField2D advection(const VecField2D& u) const;
    VecField2D damping(const VecField2D& u) const;
    void check_finite(const VecField2D& f, const char* where) const;

    const GeometryBundle* geo_;
    mutable SpectralWorkspace ws_;
    VecField2D u_;
    double t_ = 0.0;
    double initial_omega_norm_ = 0.0;
    bool admissible_ = true;

    // frozen coefficient planes
    Field2D c_;                      ///< sqrt(nu/(2 cos(gamma)))
    Field2D d11_, d12_, d21_, d22_;  ///< entries of D
    Field2D m11_, m12_, m21_, m22_;  ///< curvature-source matrix
    Field2D sa_, sb_, sc_;           ///< slope-source planes Bx^2, 2 Bx By, By^2
};

}  // namespace ekman
