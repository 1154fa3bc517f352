/// @file axis.cpp
/// @brief Implementation of the layer-coordinate axis.

#include "ekman/axis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ekman {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.7071067811865475244;

template <class T>
std::vector<T> cumtrapz(const std::vector<double>& z, const std::vector<T>& f) {
    if (f.size() != z.size())
        throw std::invalid_argument("StretchedAxis: sample count " + std::to_string(f.size()) +
                                    " does not match the " + std::to_string(z.size()) +
                                    "-node axis");
    std::vector<T> out(f.size());
    out[0] = T{};
    for (std::size_t q = 1; q < f.size(); ++q)
        out[q] = out[q - 1] + 0.5 * (z[q] - z[q - 1]) * (f[q] + f[q - 1]);
    return out;
}

template <class T>
std::vector<T> suffix_from_prefix(std::vector<T> cum) {
    const T total = cum.back();
    for (T& v : cum) v = total - v;
    return cum;
}

}  // namespace

StretchedAxis::StretchedAxis(int n_nodes, double z_max, double tail_tol)
    : z_max_(z_max), tail_tol_(tail_tol) {
    if (n_nodes < 4)
        throw std::invalid_argument("StretchedAxis: need at least 4 nodes, got " +
                                    std::to_string(n_nodes));
    if (!(z_max > 0.0) || !(tail_tol > 0.0))
        throw std::invalid_argument("StretchedAxis: z_max and tail_tol must be positive");

    // Truncation must leave the layer envelope below the tail tolerance.
    const double leftover = std::exp(-z_max * kInvSqrt2);
    if (leftover >= tail_tol) {
        std::ostringstream os;
        os << "StretchedAxis: z_max = " << z_max << " truncates too early: exp(-z_max/sqrt2) = "
           << leftover << " >= tail_tol = " << tail_tol;
        throw std::invalid_argument(os.str());
    }

    // Chebyshev-Lobatto nodes ascending on [0, z_max] and the matching
    // Clenshaw-Curtis weights (cosine-series integration of the cardinal
    // functions).
    const int N = n_nodes - 1;
    nodes_.resize(n_nodes);
    weights_.resize(n_nodes);
    for (int j = 0; j <= N; ++j)
        nodes_[j] = 0.5 * (1.0 - std::cos(kPi * j / N)) * z_max;
    for (int j = 0; j <= N; ++j) {
        const double theta = kPi * j / N;
        const double iota = (j == 0 || j == N) ? 0.5 : 1.0;
        double s = 0.0;
        for (int m = 0; m <= N; m += 2) {
            const double kappa = (m == 0 || m == N) ? 0.5 : 1.0;
            s += kappa * std::cos(m * theta) / (1.0 - double(m) * m);
        }
        weights_[j] = (4.0 * iota / N) * s * (0.5 * z_max);
    }

    // Self-check: the two fundamental layer shapes must integrate to their
    // closed forms (truncated at z_max) to 1e-10.
    std::vector<double> fc(n_nodes), fs(n_nodes);
    for (int q = 0; q < n_nodes; ++q) {
        const double z = nodes_[q];
        fc[q] = std::exp(-z * kInvSqrt2) * std::cos(z * kInvSqrt2);
        fs[q] = std::exp(-z * kInvSqrt2) * std::sin(z * kInvSqrt2);
    }
    const double a = z_max * kInvSqrt2;
    const double exact_c = kInvSqrt2 * (1.0 + std::exp(-a) * (std::sin(a) - std::cos(a)));
    const double exact_s = kInvSqrt2 * (1.0 - std::exp(-a) * (std::sin(a) + std::cos(a)));
    if (std::abs(integrate(fc) - exact_c) > 1e-10 || std::abs(integrate(fs) - exact_s) > 1e-10)
        throw std::runtime_error(
            "StretchedAxis: quadrature self-check failed for the decaying trig shapes");
}

double StretchedAxis::integrate(const std::vector<double>& f) const {
    if (f.size() != nodes_.size())
        throw std::invalid_argument("StretchedAxis::integrate: sample count mismatch");
    double s = 0.0;
    for (std::size_t q = 0; q < f.size(); ++q) s += weights_[q] * f[q];
    return s;
}

std::complex<double> StretchedAxis::integrate(const std::vector<std::complex<double>>& f) const {
    if (f.size() != nodes_.size())
        throw std::invalid_argument("StretchedAxis::integrate: sample count mismatch");
    std::complex<double> s = 0.0;
    for (std::size_t q = 0; q < f.size(); ++q) s += weights_[q] * f[q];
    return s;
}

std::vector<double> StretchedAxis::cumulative_trapezoid(const std::vector<double>& f) const {
    return cumtrapz(nodes_, f);
}

std::vector<std::complex<double>> StretchedAxis::cumulative_trapezoid(
    const std::vector<std::complex<double>>& f) const {
    return cumtrapz(nodes_, f);
}

std::vector<double> StretchedAxis::tail_trapezoid(const std::vector<double>& f) const {
    return suffix_from_prefix(cumtrapz(nodes_, f));
}

std::vector<std::complex<double>> StretchedAxis::tail_trapezoid(
    const std::vector<std::complex<double>>& f) const {
    return suffix_from_prefix(cumtrapz(nodes_, f));
}

}  // namespace ekman
