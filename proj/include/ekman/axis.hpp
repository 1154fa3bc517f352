/// @file axis.hpp
/// @brief Discretization of the dimensionless layer coordinate: clustered
///        nodes on [0, z_max], Clenshaw-Curtis weights, and the trapezoid
///        prefix/suffix rules used for cumulative and tail integrals.

#pragma once

#include <complex>
#include <vector>

namespace ekman {

/// Shared vertical axis for the boundary-layer profiles. Nodes are
/// Chebyshev-Lobatto points (clustered at both ends, ascending from 0), so a
/// single axis resolves both the wall region and the decaying tail.
class StretchedAxis {
  public:
    /// Defaults chosen so that even polynomial-corrected layer shapes
    /// (z^3 e^(-z/sqrt2)) sit below the tail tolerance at the truncation.
    explicit StretchedAxis(int n_nodes = 256, double z_max = 45.0, double tail_tol = 1e-8);

    int size() const { return static_cast<int>(nodes_.size()); }
    double z_max() const { return z_max_; }
    double tail_tol() const { return tail_tol_; }
    double node(int q) const { return nodes_[q]; }
    const std::vector<double>& nodes() const { return nodes_; }
    /// Clenshaw-Curtis weights: sum(w[q] f[q]) integrates over [0, z_max]
    /// with spectral accuracy for smooth integrands.
    const std::vector<double>& weights() const { return weights_; }

    double integrate(const std::vector<double>& f) const;
    std::complex<double> integrate(const std::vector<std::complex<double>>& f) const;

    /// Trapezoid prefix sums: out[q] = int_0^{z_q} f. First entry is 0.
    std::vector<double> cumulative_trapezoid(const std::vector<double>& f) const;
    std::vector<std::complex<double>> cumulative_trapezoid(
        const std::vector<std::complex<double>>& f) const;
    /// Trapezoid suffix sums: out[q] = int_{z_q}^{z_max} f. Last entry is 0.
    std::vector<double> tail_trapezoid(const std::vector<double>& f) const;
    std::vector<std::complex<double>> tail_trapezoid(
        const std::vector<std::complex<double>>& f) const;

  private:
    double z_max_ = 0.0;
    double tail_tol_ = 0.0;
    std::vector<double> nodes_, weights_;
};

}  // namespace ekman
