/// @file assembler.hpp
/// @brief Assembly of the approximate channel solution: terrain-following 3-D
///        sampling of the interior + layer stacks, the chi-blend of the two
///        walls, the explicit divergence corrector, and snapshot IO.

#pragma once

#include <string>
#include <vector>

#include "ekman/cutoff.hpp"
#include "ekman/field2d.hpp"
#include "ekman/geometry.hpp"
#include "ekman/limit2d.hpp"
#include "ekman/profiles.hpp"
#include "ekman/spectral.hpp"

namespace ekman {

// ----------------------------------------------------------------------
// 3-D sampled fields on the terrain-following grid (x, y, zeta = z - B)
// ----------------------------------------------------------------------

/// Plane-major storage: index (q * ny + j) * nx + i for vertical node q.
struct Field3D {
    Grid2D grid;
    std::vector<double> zeta;
    std::vector<double> v;

    Field3D() = default;
    Field3D(const Grid2D& g, std::vector<double> znodes)
        : grid(g), zeta(std::move(znodes)),
          v(g.size() * zeta.size(), 0.0) {}

    int nz() const { return static_cast<int>(zeta.size()); }
    std::size_t size() const { return v.size(); }
    double& at(int i, int j, int q) { return v[(static_cast<std::size_t>(q) * grid.ny + j) * grid.nx + i]; }
    double at(int i, int j, int q) const {
        return v[(static_cast<std::size_t>(q) * grid.ny + j) * grid.nx + i];
    }

    Field2D plane(int q) const;
    void set_plane(int q, const Field2D& f);
    double max_abs() const;
};

/// Vertical grid on [0, 2], tanh-clustered toward both walls, with trapezoid
/// quadrature weights.
struct ZetaGrid {
    std::vector<double> nodes, weights;
    double sigma = 0.0;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Builds an n-node grid whose first (and last) spacing is at most
/// wall_spacing. Throws if n < 8 or the spacing target is not positive.
ZetaGrid make_zeta_grid(int n, double wall_spacing);

/// L2 norm over the slab: sum |f|^2 dA w_q.
double slab_l2(const Field3D& f, const ZetaGrid& zg);

// ----------------------------------------------------------------------
// Terrain-following derivative kernel (shared with the verification layer)
// ----------------------------------------------------------------------

/// Divergence of a vector field on one zeta-plane. Horizontal derivatives are
/// spectral at fixed zeta; the caller supplies the analytic vertical
/// derivatives, and the kernel applies the terrain chain rule
/// d/dx|_z = d/dx|_zeta - B_x d/dzeta.
Field2D terrain_divergence_plane(const SpectralWorkspace& sp, const GeometryBundle& geo,
                                 const Field2D& u1, const Field2D& u2, const Field2D& du1,
                                 const Field2D& du2, const Field2D& du3);

// ----------------------------------------------------------------------
// Assembly
// ----------------------------------------------------------------------

/// Velocity stack before the corrector, with its divergence defect.
struct UncorrectedField {
    Field3D u1, u2, u3;
    Field3D defect;  // minus the terrain-following divergence
    double defect_l2 = 0.0, defect_linf = 0.0;
};

/// Blends the two wall stacks with the cutoff and samples them on the grid.
/// Layer fields are evaluated analytically per column (z_tilde = zeta / delta
/// from below, (2 - zeta) / delta from above).
UncorrectedField assemble_uncorrected(const VecField2D& u_bar, const LayerProfileSet& bottom,
                                      const LayerProfileSet& top, const GeometryBundle& geo,
                                      const SpectralWorkspace& sp, const CutoffProfile& chi,
                                      const ZetaGrid& zg);

/// Analytic vertical derivatives of the same blended stack, and the blended
/// layer-pressure tail with its derivative. Shares every evaluation convention
/// with assemble_uncorrected; used by the residual evaluator, which needs
/// first and second zeta-derivatives of everything.
struct StackDerivatives {
    Field3D du1, du2, du3;     ///< d/dzeta of the blended velocity stack
    Field3D d2u1, d2u2, d2u3;  ///< second derivative
    Field3D p_layer;           ///< blended layer pressure (delta p1 + delta^2 p2)
    Field3D dp_layer;          ///< its d/dzeta
};

StackDerivatives stack_derivatives(const LayerProfileSet& bottom, const LayerProfileSet& top,
                                   const GeometryBundle& geo, const CutoffProfile& chi,
                                   const ZetaGrid& zg);

/// Explicit divergence corrector: vertical antiderivative plus a horizontal
/// potential flow under the interior bump, with the metric term cancelled in
/// closed form. V vanishes identically on both walls.
struct Corrector {
    Field3D v1, v2, v3;
    Field2D g;    // bump amplitude: vertically integrated defect / bump mass
    Field2D phi;  // horizontal potential, lap phi = g - mean(g)
    double closure_l2 = 0.0;   // ||div V - defect|| / ||defect||
    double mean_g = 0.0;       // box mean removed before the Poisson solve
    double boundary_max = 0.0; // largest defect sample outside the bump support
};

Corrector divergence_corrector(const Field3D& defect, const GeometryBundle& geo,
                               const SpectralWorkspace& sp);

/// Defect bookkeeping carried on the assembled solution.
struct DefectInfo {
    double defect_l2 = 0.0, defect_linf = 0.0;
    double closure_l2 = 0.0, mean_g = 0.0, boundary_max = 0.0;
};

struct AssemblyOptions {
    int n_zeta = 96;
    int cutoff_order = 3;
    StretchedAxis axis{};
    PressureTailTimeSign p2_sign = PressureTailTimeSign::Plus;
};

/// The assembled approximation. The analytic ingredients (profile sets,
/// cutoff, geometry, limit state) are retained so diagnostics can re-expand
/// any single order without re-deriving it.
struct ApproxSolution {
    GeometryBundle geometry;
    VecField2D u_bar, u_bar_t;
    Field2D p_bar, p0_int;
    double time = 0.0, eps = 0.0, nu = 0.0;

    LayerProfileSet bottom, top;
    CutoffProfile chi;
    ZetaGrid zgrid;
    StretchedAxis axis;
    PressureTailTimeSign p2_sign = PressureTailTimeSign::Plus;

    Field3D u1, u2, u3, p;   // corrected velocity and pressure stacks
    Field3D v1, v2, v3;      // corrector
    Field3D defect;          // pre-corrector divergence defect
    DefectInfo info;
};

ApproxSolution assemble_approx(const LimitSolver& limit, const AssemblyOptions& opts = {});

/// || U_app - limit field ||_L2 over the slab; the limit field carries the
/// slaved vertical component grad B . u_h.
double approx_minus_limit_l2(const ApproxSolution& s);

// ----------------------------------------------------------------------
// Snapshot IO: little-endian binary, int64 nx, ny, nz then float64 lx, ly,
// eps, nu, time, then the zeta nodes, then u1, u2, u3, p plane-major.
// ----------------------------------------------------------------------

struct Snapshot {
    Grid2D grid;
    double eps = 0.0, nu = 0.0, time = 0.0;
    std::vector<double> zeta;
    Field3D u1, u2, u3, p;
};

void save_snapshot(const ApproxSolution& s, const std::string& path);
Snapshot load_snapshot(const std::string& path);

}  // namespace ekman
