/// @file surface.hpp
/// @brief Bottom-surface presets z = B(x,y), their exact derivative jets, and
///        sampled-surface file IO.

#pragma once

#include <optional>
#include <string>

#include "ekman/field2d.hpp"
#include "ekman/grid.hpp"

namespace ekman {

/// Value and derivatives of B at one point, through second order.
struct SurfaceJet {
    double b = 0.0, bx = 0.0, by = 0.0;
    double bxx = 0.0, bxy = 0.0, byy = 0.0;
};

/// Closed-form surface families. `tilt` and `paraboloid` are not periodic and
/// exist for pointwise oracle checks only; sampling them to a grid is refused.
struct SurfaceSpec {
    enum class Kind { Flat, Tilt, Paraboloid, Bump, EggCarton };
    Kind kind = Kind::Flat;

    double c = 0.0;             // flat: B = c
    double a = 0.0;             // tilt: B = a*x ; paraboloid: B = a*(x^2+y^2)/2
    double amp = 0.0;           // bump / eggcarton amplitude
    double width = 0.25;        // bump width (dimensionless, in box units)
    double cx = -1.0, cy = -1.0;  // bump center; negative = center of the box
    int kx = 1, ky = 1;         // eggcarton integer mode counts

    static SurfaceSpec flat(double c);
    static SurfaceSpec tilt(double a);
    static SurfaceSpec paraboloid(double a);
    static SurfaceSpec bump(double amp, double width);
    static SurfaceSpec eggcarton(double amp, int kx, int ky);

    bool periodic() const { return kind == Kind::Flat || kind == Kind::Bump || kind == Kind::EggCarton; }
    std::string name() const;
};

/// Evaluate the exact 2-jet of the preset at (x, y). Periodic presets need the
/// box lengths; the others ignore them.
SurfaceJet surface_jet(const SurfaceSpec& s, double x, double y, double lx, double ly);

/// A surface sampled on the horizontal grid. When built from a preset the
/// analytic spec is retained so geometry can use closed-form derivatives.
struct SurfaceField {
    Grid2D grid;
    Field2D b;
    std::optional<SurfaceSpec> spec;
};

/// Sample a periodic preset onto the grid. Non-periodic presets throw.
SurfaceField build_surface(const Grid2D& grid, const SurfaceSpec& spec);

/// Text format: first line "Nx Ny Lx Ly", then Nx*Ny samples row-major
/// (y outer, x inner), whitespace-separated.
SurfaceField load_surface(const std::string& path);
void save_surface(const SurfaceField& s, const std::string& path);

}  // namespace ekman
