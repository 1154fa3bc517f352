/// @file surface.cpp
/// @brief Surface preset jets and sampled-surface IO.

#include "ekman/surface.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ekman {

SurfaceSpec SurfaceSpec::flat(double c) {
    SurfaceSpec s;
    s.kind = Kind::Flat;
    s.c = c;
    return s;
}

SurfaceSpec SurfaceSpec::tilt(double a) {
    SurfaceSpec s;
    s.kind = Kind::Tilt;
    s.a = a;
    return s;
}

SurfaceSpec SurfaceSpec::paraboloid(double a) {
    SurfaceSpec s;
    s.kind = Kind::Paraboloid;
    s.a = a;
    return s;
}

SurfaceSpec SurfaceSpec::bump(double amp, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("bump: width must be positive");
    SurfaceSpec s;
    s.kind = Kind::Bump;
    s.amp = amp;
    s.width = width;
    return s;
}

SurfaceSpec SurfaceSpec::eggcarton(double amp, int kx, int ky) {
    if (kx < 1 || ky < 1) throw std::invalid_argument("eggcarton: mode counts must be >= 1");
    SurfaceSpec s;
    s.kind = Kind::EggCarton;
    s.amp = amp;
    s.kx = kx;
    s.ky = ky;
    return s;
}

std::string SurfaceSpec::name() const {
    switch (kind) {
        case Kind::Flat: return "flat";
        case Kind::Tilt: return "tilt";
        case Kind::Paraboloid: return "paraboloid";
        case Kind::Bump: return "bump";
        case Kind::EggCarton: return "eggcarton";
    }
    return "?";
}

SurfaceJet surface_jet(const SurfaceSpec& s, double x, double y, double lx, double ly) {
    SurfaceJet j;
    switch (s.kind) {
        case SurfaceSpec::Kind::Flat:
            j.b = s.c;
            break;
        case SurfaceSpec::Kind::Tilt:
            j.b = s.a * x;
            j.bx = s.a;
            break;
        case SurfaceSpec::Kind::Paraboloid:
            j.b = 0.5 * s.a * (x * x + y * y);
            j.bx = s.a * x;
            j.by = s.a * y;
            j.bxx = s.a;
            j.byy = s.a;
            break;
        case SurfaceSpec::Kind::EggCarton: {
            const double wx = 2.0 * M_PI * s.kx / lx, wy = 2.0 * M_PI * s.ky / ly;
            const double sx = std::sin(wx * x), cx = std::cos(wx * x);
            const double sy = std::sin(wy * y), cy = std::cos(wy * y);
            j.b = s.amp * sx * sy;
            j.bx = s.amp * wx * cx * sy;
            j.by = s.amp * wy * sx * cy;
            j.bxx = -s.amp * wx * wx * sx * sy;
            j.byy = -s.amp * wy * wy * sx * sy;
            j.bxy = s.amp * wx * wy * cx * cy;
            break;
        }
        case SurfaceSpec::Kind::Bump: {
            // B = amp * exp(-q/w^2), q = sin^2(pi*(x-cx)/lx) + sin^2(pi*(y-cy)/ly):
            // a smooth periodic blob centered at (cx, cy).
            const double cx0 = s.cx < 0.0 ? 0.5 * lx : s.cx;
            const double cy0 = s.cy < 0.0 ? 0.5 * ly : s.cy;
            const double ax = M_PI / lx, ay = M_PI / ly;
            const double sx = std::sin(ax * (x - cx0)), sy = std::sin(ay * (y - cy0));
            const double q = sx * sx + sy * sy;
            const double qx = ax * std::sin(2.0 * ax * (x - cx0));
            const double qy = ay * std::sin(2.0 * ay * (y - cy0));
            const double qxx = 2.0 * ax * ax * std::cos(2.0 * ax * (x - cx0));
            const double qyy = 2.0 * ay * ay * std::cos(2.0 * ay * (y - cy0));
            const double w2 = s.width * s.width;
            const double e = s.amp * std::exp(-q / w2);
            j.b = e;
            j.bx = -e * qx / w2;
            j.by = -e * qy / w2;
            j.bxx = e * (qx * qx / (w2 * w2) - qxx / w2);
            j.byy = e * (qy * qy / (w2 * w2) - qyy / w2);
            j.bxy = e * qx * qy / (w2 * w2);
            break;
        }
    }
    return j;
}

SurfaceField build_surface(const Grid2D& grid, const SurfaceSpec& spec) {
    if (!spec.periodic())
        throw std::invalid_argument("build_surface: preset '" + spec.name() +
                                    "' is not periodic and cannot be sampled to a grid "
                                    "(pointwise use only)");
    SurfaceField s{grid, Field2D(grid), spec};
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            s.b(i, j) = surface_jet(spec, grid.x(i), grid.y(j), grid.lx, grid.ly).b;
    return s;
}

SurfaceField load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_surface: cannot open " + path);
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    in >> nx >> ny >> lx >> ly;
    if (!in) throw std::runtime_error("load_surface: malformed header in " + path);
    if (!is_power_of_two(nx) || !is_power_of_two(ny))
        throw std::runtime_error("load_surface: grid dims must be powers of two, got " +
                                 std::to_string(nx) + " x " + std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::runtime_error("load_surface: box lengths must be positive");
    Grid2D grid(nx, ny, lx, ly);
    SurfaceField s{grid, Field2D(grid), std::nullopt};
    // strtod-based parse: stream extraction would reject "nan"/"inf" tokens
    // outright and we want to report them as non-finite data instead.
    std::string tok;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(in >> tok))
            throw std::runtime_error("load_surface: expected " + std::to_string(grid.size()) +
                                     " samples, file ended at " + std::to_string(k));
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw std::runtime_error("load_surface: unparseable sample '" + tok + "' at index " +
                                     std::to_string(k));
        if (!std::isfinite(v))
            throw std::runtime_error("load_surface: non-finite sample at index " + std::to_string(k));
        s.b[k] = v;
    }
    return s;
}

void save_surface(const SurfaceField& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_surface: cannot open " + path);
    out << s.grid.nx << " " << s.grid.ny << " " << std::setprecision(17) << s.grid.lx << " "
        << s.grid.ly << "\n";
    for (int j = 0; j < s.grid.ny; ++j) {
        for (int i = 0; i < s.grid.nx; ++i) out << std::setprecision(17) << s.b(i, j) << (i + 1 == s.grid.nx ? "" : " ");
        out << "\n";
    }
}

}  // namespace ekman
