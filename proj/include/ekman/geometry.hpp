/// @file geometry.hpp
/// @brief Derived surface geometry: direction cosines, metric matrix H0,
///        curvatures, layer thicknesses, the local boundary frame, and the
///        admissibility checks.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ekman/field2d.hpp"
#include "ekman/surface.hpp"

namespace ekman {

/// Everything geometric at a single point, derived from the surface jet.
struct PointGeometry {
    SurfaceJet jet;
    double cos_gamma = 1.0;   // vertical direction cosine of the unit normal
    double cos_alpha = 0.0;   // = -Bx * cos_gamma
    double cos_beta = 0.0;    // = -By * cos_gamma
    double det_h0 = 1.0;      // = 1 + |grad B|^2 = cos^-2(gamma)
    double kg = 0.0;          // Gaussian curvature
    double ka = 0.0;          // mean curvature
    double delta_n = 0.0;     // layer thickness along the normal
    double delta = 0.0;       // layer thickness along the z axis

    Eigen::Matrix2d h0() const {
        Eigen::Matrix2d m;
        m << 1.0 + jet.bx * jet.bx, jet.bx * jet.by, jet.bx * jet.by, 1.0 + jet.by * jet.by;
        return m;
    }
    Eigen::Matrix2d h0_inv() const { return h0().inverse(); }
    Eigen::Matrix2d hess() const {
        Eigen::Matrix2d m;
        m << jet.bxx, jet.bxy, jet.bxy, jet.byy;
        return m;
    }
    Eigen::Vector2d grad() const { return {jet.bx, jet.by}; }
};

PointGeometry compute_point_geometry(const SurfaceJet& jet, double nu, double eps);

/// Proper rotation mapping the unit surface normal to e3; reduces to the
/// identity over a flat bottom.
Eigen::Matrix3d local_frame(const PointGeometry& p);

/// Per-grid-point geometry of a sampled surface.
class GeometryBundle {
  public:
    GeometryBundle() = default;

    Grid2D grid;
    double nu = 0.0, eps = 0.0;
    Field2D b, bx, by, bxx, bxy, byy;
    Field2D cos_gamma, cos_alpha, cos_beta, det_h0, kg, ka, delta_n, delta;
    std::optional<SurfaceSpec> spec;  // retained for closed-form refinement

    SurfaceJet jet_at(int i, int j) const {
        return {b(i, j), bx(i, j), by(i, j), bxx(i, j), bxy(i, j), byy(i, j)};
    }
    PointGeometry point(int i, int j) const { return compute_point_geometry(jet_at(i, j), nu, eps); }

    double max_abs_b() const { return b.max_abs(); }
};

enum class DerivMode {
    Auto,      ///< analytic jets when the surface has a spec, else spectral
    Analytic,  ///< closed-form derivatives (requires a preset surface)
    Spectral   ///< FFT derivatives of the sampled heights
};

GeometryBundle derive_geometry(const SurfaceField& surf, double nu, double eps,
                               DerivMode mode = DerivMode::Auto);

// ----------------------------------------------------------------------
// Admissibility
// ----------------------------------------------------------------------

enum class AdmissMode { Theorem1, Theorem2 };

struct AdmissCondition {
    std::string name;
    double value = 0.0;      // measured supremum
    double threshold = 0.0;  // strict upper bound required
    double at_x = 0.0, at_y = 0.0;
    bool pass() const { return value < threshold; }
};

struct AdmissibilityReport {
    AdmissMode mode = AdmissMode::Theorem1;
    double sigma = 0.0, eps = 0.0;  // Theorem-2 parameters
    std::vector<AdmissCondition> conditions;
    bool pass = false;
    std::string summary() const;
};

/// Checks the smallness conditions. Sup values are taken over the bundle grid;
/// if the surface is analytic and refine_n > 0, a refine_n^2 closed-form scan
/// is used instead (robust near thresholds).
AdmissibilityReport check_admissibility(const GeometryBundle& g, AdmissMode mode,
                                        double sigma = 1.0, int refine_n = 512);

}  // namespace ekman
