/// @file profiles.hpp
/// @brief Boundary-layer and interior correction profiles near the two walls:
///        the order-0 spiral, the order-1 interior drift and its layer
///        response, the layer pressures, and the order-2 vertical closure.
///        All vertical structure is carried exactly in the exp-polynomial
///        algebra; the axis is used for validation, norms and sampling.

#pragma once

#include <iosfwd>
#include <vector>

#include "ekman/axis.hpp"
#include "ekman/diag_pack.hpp"
#include "ekman/field2d.hpp"
#include "ekman/geometry.hpp"
#include "ekman/spectral.hpp"
#include "ekman/zseries.hpp"

namespace ekman {

enum class LayerSide { Bottom, Top };

/// Sign convention for the time-derivative term inside the order-2 layer
/// pressure tail. The two candidate conventions disagree; the default is the
/// one consistent with the vertical momentum balance, and the residual
/// comparator in the verification layer confirms the choice numerically.
enum class PressureTailTimeSign { Plus, Minus };

const char* side_name(LayerSide s);

/// Order-0 layer velocity plus the order-1 layer pressure it induces.
/// Functions of the stretched wall distance; identical in form on both
/// sides, except the pressure flips sign on the top wall.
struct Order0Profiles {
    LayerSide side = LayerSide::Bottom;
    SeriesPlane u1, u2, u3;
    SeriesPlane p1;
};

/// The z-independent interior horizontal drift at first order and its
/// vertical companion, affine in height: U3 = u3_base + (B + 1 - z) * u3_slope.
struct InteriorOrder1 {
    VecField2D uh;
    Field2D u3_base, u3_slope;

    /// Evaluate U3 on a terrain-following level z = B + zeta.
    Field2D u3_at_zeta(double zeta) const;
    /// Evaluate U3 on the flat level z (uses the sampled surface heights).
    Field2D u3_at_height(const Field2D& b, double z) const;
};

/// The diagonalized layer forcing pair: two complex scalar amplitudes per
/// grid point, one per eigen-slot of the layer coupling matrix.
struct ForcingProfiles {
    LayerSide side = LayerSide::Bottom;
    SeriesPlane g3, g4;  // complex-valued series
};

/// Order-1 layer velocity and the order-2 layer pressure.
struct Order1Profiles {
    LayerSide side = LayerSide::Bottom;
    SeriesPlane u1, u2, u3;
    SeriesPlane p2;
};

/// Order-2 layer correction: only the vertical component is nonzero, and its
/// wall value is cancelled by a z-independent interior counterpart.
struct Order2Profiles {
    LayerSide side = LayerSide::Bottom;
    SeriesPlane u3;
    Field2D u3_int;  // = -u3(0)
};

/// Everything the assembler needs for one wall.
struct LayerProfileSet {
    LayerSide side = LayerSide::Bottom;
    Order0Profiles o0;
    InteriorOrder1 interior;
    Order1Profiles o1;
    Order2Profiles o2;
};

// ----------------------------------------------------------------------
// Builders. All formulas are jointly linear in (u, u_t), so the time
// derivative of any profile is the same construction applied to
// (u_t, u_tt); no finite differencing in time anywhere.
// ----------------------------------------------------------------------

Order0Profiles profile_order0(const VecField2D& u, const GeometryBundle& geo, LayerSide side);

InteriorOrder1 interior_order1(const VecField2D& u, const GeometryBundle& geo,
                               const SpectralWorkspace& sp);

ForcingProfiles forcing_terms(const VecField2D& u, const VecField2D& u_t,
                              const GeometryBundle& geo, const SpectralWorkspace& sp,
                              LayerSide side, const StretchedAxis& axis);

Order1Profiles profile_order1(const VecField2D& u, const VecField2D& u_t,
                              const GeometryBundle& geo, const SpectralWorkspace& sp,
                              LayerSide side, const StretchedAxis& axis,
                              PressureTailTimeSign p2_sign = PressureTailTimeSign::Plus);

Order2Profiles profile_order2(const Order1Profiles& o1, const GeometryBundle& geo,
                              const SpectralWorkspace& sp, LayerSide side,
                              const StretchedAxis& axis);

LayerProfileSet build_layer_profiles(const VecField2D& u, const VecField2D& u_t,
                                     const GeometryBundle& geo, const SpectralWorkspace& sp,
                                     LayerSide side, const StretchedAxis& axis,
                                     PressureTailTimeSign p2_sign = PressureTailTimeSign::Plus);

// ----------------------------------------------------------------------
// Sampling, norms and dumps
// ----------------------------------------------------------------------

/// One layer amplitude sampled on the axis nodes.
std::vector<Cplx> sample_series(const ZSeries& g, const StretchedAxis& axis);

/// L2 norm of a layer field over the slab: integrates |f|^2 dz dx dy with
/// dz = delta(x, y) dz_layer, axis quadrature in the vertical.
double layer_l2_norm(const SeriesPlane& f, const Field2D& delta, const StretchedAxis& axis);

/// CSV dump of all profile components at one horizontal point, one row per
/// axis node; used for spiral/hodograph plots.
void write_profile_csv(std::ostream& os, const LayerProfileSet& set, int i, int j,
                       const StretchedAxis& axis);

}  // namespace ekman
