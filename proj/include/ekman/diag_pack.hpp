/// @file diag_pack.hpp
/// @brief Pointwise diagonalization of the matrix coupling the horizontal
///        velocity components in the layer equations, with both a smooth
///        closed-form eigenvector pack and an independently computed numeric
///        pack for cross-checking.

#pragma once

#include <Eigen/Dense>
#include <string>

#include "ekman/geometry.hpp"

namespace ekman {

/// Eigen-pack at one grid point: M = Q diag(i, -i) Q^-1 where
/// M = cos^-1(gamma) H0^-1 E1 = cos(gamma) E1 H0. M squares to -I, so its
/// eigenvalues are exactly +-i everywhere; only the eigenvectors vary.
struct DiagPoint {
    Eigen::Matrix2cd q;      // columns: eigenvectors for +i, then -i
    Eigen::Matrix2cd q_inv;
    double residual_diag = 0.0;  // max-entry |q_inv M q - diag(i,-i)|
    double residual_id = 0.0;    // max-entry |q q_inv - I|
};

/// How far one eigen-pack's column directions are from another's, ignoring
/// the scale/phase freedom of eigenvectors.
struct DiagDiscrepancy {
    double direction_residual = 0.0;  // max over columns after phase alignment
    double norm_col1 = 0.0;           // raw column magnitudes of the first pack
    double norm_col2 = 0.0;
    std::string describe() const;
};

/// The coupled 2x2 system matrix at a point (real).
Eigen::Matrix2d layer_coupling_matrix(const PointGeometry& p);

/// Closed-form pack: smooth in (x, y), the one used to build profiles.
/// Columns are conjugates of each other; entries stay O(1) for admissible
/// surfaces.
DiagPoint diag_closed_form(const PointGeometry& p);

/// Independent numeric eigendecomposition (unit columns, solver-chosen
/// phase); audit route only, since the phase is not smooth in (x, y).
DiagPoint diag_numeric(const PointGeometry& p);

DiagDiscrepancy compare_packs(const DiagPoint& a, const DiagPoint& b);

}  // namespace ekman
