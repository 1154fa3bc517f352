/// @file cutoff.hpp
/// @brief Vertical blending shapes on the channel coordinate zeta in [0, 2]:
///        the wall-to-wall cutoff chi and the interior bump used by the
///        divergence corrector.

#pragma once

namespace ekman {

/// Polynomial smoothstep cutoff: 0 on [0, 1/2], 1 on [3/2, 2], monotone in
/// between, with the first `order` derivatives vanishing at both gluing
/// points. chi(1) = 1/2 by symmetry.
struct CutoffProfile {
    int order = 3;

    double value(double zeta) const;
    double deriv(double zeta) const;
    double deriv2(double zeta) const;
};

/// Builds the cutoff; order must be at least 2.
CutoffProfile make_cutoff(int order = 3);

/// Smooth bump supported on (1/4, 7/4): exp(-1 / (1 - s^2)) with
/// s = (zeta - 1) / (3/4). Used to spread the vertically integrated defect.
double corrector_bump(double zeta);
double corrector_bump_deriv(double zeta);
double corrector_bump_deriv2(double zeta);

}  // namespace ekman
