/// @file diag_pack.cpp
/// @brief Closed-form and numeric eigen-packs for the layer coupling matrix.

#include "ekman/diag_pack.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace ekman {

namespace {

using Cd = std::complex<double>;

double max_abs(const Eigen::Matrix2cd& m) {
    double r = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r = std::max(r, std::abs(m(i, j)));
    return r;
}

void fill_residuals(DiagPoint& d, const Eigen::Matrix2d& m) {
    Eigen::Matrix2cd target = Eigen::Matrix2cd::Zero();
    target(0, 0) = Cd(0.0, 1.0);
    target(1, 1) = Cd(0.0, -1.0);
    d.residual_diag = max_abs(d.q_inv * m.cast<Cd>() * d.q - target);
    d.residual_id = max_abs(d.q * d.q_inv - Eigen::Matrix2cd::Identity());
}

}  // namespace

Eigen::Matrix2d layer_coupling_matrix(const PointGeometry& p) {
    const double cg = p.cos_gamma;
    const double bx = p.jet.bx, by = p.jet.by;
    Eigen::Matrix2d m;
    m << cg * bx * by, cg * (1.0 + by * by), -cg * (1.0 + bx * bx), -cg * bx * by;
    return m;
}

DiagPoint diag_closed_form(const PointGeometry& p) {
    const double cg = p.cos_gamma;
    const double bx = p.jet.bx, by = p.jet.by;
    const double a = cg * (1.0 + by * by);  // never 0: cg >= cos(gamma) > 0
    const double b = cg * bx * by;
    const Cd i1(0.0, 1.0);

    DiagPoint d;
    // Eigenvector columns for +i and -i; the second is the conjugate of the
    // first, which keeps real-part extraction exact downstream.
    d.q << Cd(a, 0.0), Cd(a, 0.0), i1 - b, -i1 - b;
    // Explicit inverse: det Q = -2i a, so Q^-1 = -i/(2a) [[i+b, a], [i-b, -a]].
    d.q_inv << Cd(1.0, -b) / (2.0 * a), Cd(0.0, -0.5), Cd(1.0, b) / (2.0 * a), Cd(0.0, 0.5);
    fill_residuals(d, layer_coupling_matrix(p));
    return d;
}

DiagPoint diag_numeric(const PointGeometry& p) {
    const Eigen::Matrix2d m = layer_coupling_matrix(p);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m.cast<Cd>());
    Eigen::Matrix2cd v = es.eigenvectors();
    Eigen::Vector2cd w = es.eigenvalues();
    // Fixed ordering: +i first.
    if (w(0).imag() < 0.0) {
        v.col(0).swap(v.col(1));
        std::swap(w(0), w(1));
    }
    DiagPoint d;
    d.q = v;
    d.q_inv = v.inverse();
    fill_residuals(d, m);
    return d;
}

DiagDiscrepancy compare_packs(const DiagPoint& a, const DiagPoint& b) {
    DiagDiscrepancy out;
    out.norm_col1 = a.q.col(0).norm();
    out.norm_col2 = a.q.col(1).norm();
    for (int j = 0; j < 2; ++j) {
        Eigen::Vector2cd va = a.q.col(j).normalized();
        Eigen::Vector2cd vb = b.q.col(j).normalized();
        Cd phase = vb.dot(va);  // vb^H va: aligns the free eigenvector phase
        if (std::abs(phase) > 0.0) phase /= std::abs(phase);
        out.direction_residual = std::max(out.direction_residual, (va - phase * vb).norm());
    }
    return out;
}

std::string DiagDiscrepancy::describe() const {
    std::ostringstream os;
    os << "eigenvector direction residual " << direction_residual << ", raw column norms "
       << norm_col1 << " / " << norm_col2;
    return os.str();
}

}  // namespace ekman
