/// @file cutoff.cpp
/// @brief Smoothstep cutoff and corrector bump on the channel coordinate.

#include "ekman/cutoff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ekman {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

/// Smoothstep S_N on [0, 1]: first N derivatives vanish at both ends.
double smoothstep(int n, double t) {
    double acc = 0.0;
    for (int k = n; k >= 0; --k) {
        const double c = binom(n + k, k) * binom(2 * n + 1, n - k);
        acc = acc * (-t) + c;
    }
    return std::pow(t, n + 1) * acc;
}

/// d/dt S_N = (2N+1) C(2N, N) t^N (1-t)^N.
double smoothstep_deriv(int n, double t) {
    return (2 * n + 1) * binom(2 * n, n) * std::pow(t * (1.0 - t), n);
}

double smoothstep_deriv2(int n, double t) {
    return (2 * n + 1) * binom(2 * n, n) * n * std::pow(t * (1.0 - t), n - 1) * (1.0 - 2.0 * t);
}

}  // namespace

double CutoffProfile::value(double zeta) const {
    if (zeta <= 0.5) return 0.0;
    if (zeta >= 1.5) return 1.0;
    return smoothstep(order, zeta - 0.5);
}

double CutoffProfile::deriv(double zeta) const {
    if (zeta <= 0.5 || zeta >= 1.5) return 0.0;
    return smoothstep_deriv(order, zeta - 0.5);
}

double CutoffProfile::deriv2(double zeta) const {
    if (zeta <= 0.5 || zeta >= 1.5) return 0.0;
    return smoothstep_deriv2(order, zeta - 0.5);
}

CutoffProfile make_cutoff(int order) {
    if (order < 2)
        throw std::invalid_argument("make_cutoff: order must be >= 2, got " +
                                    std::to_string(order));
    return CutoffProfile{order};
}

double corrector_bump(double zeta) {
    const double s = (zeta - 1.0) / 0.75;
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

double corrector_bump_deriv(double zeta) {
    const double s = (zeta - 1.0) / 0.75;
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return corrector_bump(zeta) * (-2.0 * s / (q * q)) / 0.75;
}

double corrector_bump_deriv2(double zeta) {
    const double s = (zeta - 1.0) / 0.75;
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    const double q2 = q * q;
    return corrector_bump(zeta) * (4.0 * s * s / (q2 * q2) - 2.0 / q2 - 8.0 * s * s / (q2 * q)) /
           (0.75 * 0.75);
}

}  // namespace ekman
