/// @file grid.hpp
/// @brief Uniform periodic horizontal grid shared by all modules.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ekman {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Periodic box [0,Lx) x [0,Ly) sampled at Nx x Ny points.
/// Storage convention everywhere: row-major with y (index j) as the slow
/// dimension, i.e. linear index = j*nx + i.
struct Grid2D {
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
        if (!is_power_of_two(nx) || !is_power_of_two(ny))
            throw std::invalid_argument("Grid2D: nx and ny must be powers of two, got " +
                                        std::to_string(nx) + " x " + std::to_string(ny));
        if (nx < 8 || ny < 8)
            throw std::invalid_argument("Grid2D: need at least 8 points per direction");
        if (!(lx > 0.0) || !(ly > 0.0))
            throw std::invalid_argument("Grid2D: box lengths must be positive");
    }

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double x(int i) const { return lx * i / nx; }
    double y(int j) const { return ly * j / ny; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

    bool operator==(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
    bool operator!=(const Grid2D& o) const { return !(*this == o); }
};

}  // namespace ekman
