/// @file geometry.cpp
/// @brief Geometry derivations and admissibility checks.

#include "ekman/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ekman/spectral.hpp"

namespace ekman {

PointGeometry compute_point_geometry(const SurfaceJet& jet, double nu, double eps) {
    PointGeometry p;
    p.jet = jet;
    const double g2 = jet.bx * jet.bx + jet.by * jet.by;
    p.det_h0 = 1.0 + g2;
    p.cos_gamma = 1.0 / std::sqrt(p.det_h0);
    p.cos_alpha = -jet.bx * p.cos_gamma;
    p.cos_beta = -jet.by * p.cos_gamma;

    const double det_hess = jet.bxx * jet.byy - jet.bxy * jet.bxy;
    p.kg = det_hess / (p.det_h0 * p.det_h0);
    p.ka = 0.5 * std::pow(p.det_h0, -1.5) *
           (jet.byy * (1.0 + jet.bx * jet.bx) - 2.0 * jet.bxy * jet.bx * jet.by +
            jet.bxx * (1.0 + jet.by * jet.by));

    const double s = std::sqrt(nu) * eps;
    p.delta_n = s / std::sqrt(p.cos_gamma);
    p.delta = s * std::pow(p.cos_gamma, -1.5);
    return p;
}

Eigen::Matrix3d local_frame(const PointGeometry& p) {
    // Two elementary rotations: about y by theta (sends the normal into the
    // y-z plane), then about x by phi. Signs chosen so that R * n = e3 and a
    // flat surface gives the identity.
    const double r = std::sqrt(p.cos_alpha * p.cos_alpha + p.cos_gamma * p.cos_gamma);
    const double ct = p.cos_gamma / r, st = -p.cos_alpha / r;
    const double cf = r, sf = -p.cos_beta;
    Eigen::Matrix3d m;
    m << ct, 0.0, st,
        -st * sf, cf, ct * sf,
        -st * cf, -sf, ct * cf;
    return m;
}

GeometryBundle derive_geometry(const SurfaceField& surf, double nu, double eps, DerivMode mode) {
    if (!(nu > 0.0)) throw std::invalid_argument("derive_geometry: nu must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("derive_geometry: eps must be positive");
    if (mode == DerivMode::Auto) mode = surf.spec ? DerivMode::Analytic : DerivMode::Spectral;
    if (mode == DerivMode::Analytic && !surf.spec)
        throw std::invalid_argument("derive_geometry: analytic mode needs a preset surface");

    const Grid2D& g = surf.grid;
    GeometryBundle out;
    out.grid = g;
    out.nu = nu;
    out.eps = eps;
    out.spec = surf.spec;
    out.b = surf.b;
    for (Field2D* f : {&out.bx, &out.by, &out.bxx, &out.bxy, &out.byy, &out.cos_gamma,
                       &out.cos_alpha, &out.cos_beta, &out.det_h0, &out.kg, &out.ka,
                       &out.delta_n, &out.delta})
        *f = Field2D(g);

    if (mode == DerivMode::Analytic) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const SurfaceJet jet = surface_jet(*surf.spec, g.x(i), g.y(j), g.lx, g.ly);
                out.b(i, j) = jet.b;
                out.bx(i, j) = jet.bx;
                out.by(i, j) = jet.by;
                out.bxx(i, j) = jet.bxx;
                out.bxy(i, j) = jet.bxy;
                out.byy(i, j) = jet.byy;
            }
    } else {
        SpectralWorkspace ws(g);
        out.bx = ws.dx(surf.b);
        out.by = ws.dy(surf.b);
        out.bxx = ws.dx(out.bx);
        out.bxy = ws.dy(out.bx);
        out.byy = ws.dy(out.by);
    }

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const PointGeometry p = compute_point_geometry(out.jet_at(i, j), nu, eps);
            out.cos_gamma(i, j) = p.cos_gamma;
            out.cos_alpha(i, j) = p.cos_alpha;
            out.cos_beta(i, j) = p.cos_beta;
            out.det_h0(i, j) = p.det_h0;
            out.kg(i, j) = p.kg;
            out.ka(i, j) = p.ka;
            out.delta_n(i, j) = p.delta_n;
            out.delta(i, j) = p.delta;
        }
    return out;
}

namespace {

struct SupTrack {
    double value = -1.0;
    double x = 0.0, y = 0.0;
    void update(double v, double px, double py) {
        if (v > value) {
            value = v;
            x = px;
            y = py;
        }
    }
};

/// The three pointwise quantities entering the smallness conditions.
struct CondValues {
    double abs_b, slope2, curv, mixed;
};

CondValues cond_values(const SurfaceJet& jet) {
    const PointGeometry p = compute_point_geometry(jet, 1.0, 1.0);
    const double slope2 = jet.bx * jet.bx + jet.by * jet.by;
    const double curv = 2.0 * std::abs(p.ka) + std::sqrt(std::abs(p.kg));
    const double mixed = std::abs(p.ka) + std::sqrt(std::abs(p.kg)) + std::sqrt(slope2);
    return {std::abs(jet.b), slope2, curv, mixed};
}

}  // namespace

AdmissibilityReport check_admissibility(const GeometryBundle& g, AdmissMode mode, double sigma,
                                        int refine_n) {
    if (mode == AdmissMode::Theorem2 && !(sigma > 0.0))
        throw std::invalid_argument("check_admissibility: sigma must be positive");

    SupTrack sb, sslope, scurv, smixed;
    if (g.spec && refine_n > 0) {
        for (int j = 0; j < refine_n; ++j)
            for (int i = 0; i < refine_n; ++i) {
                const double x = g.grid.lx * i / refine_n, y = g.grid.ly * j / refine_n;
                const CondValues v = cond_values(surface_jet(*g.spec, x, y, g.grid.lx, g.grid.ly));
                sb.update(v.abs_b, x, y);
                sslope.update(v.slope2, x, y);
                scurv.update(v.curv, x, y);
                smixed.update(v.mixed, x, y);
            }
    } else {
        for (int j = 0; j < g.grid.ny; ++j)
            for (int i = 0; i < g.grid.nx; ++i) {
                const double x = g.grid.x(i), y = g.grid.y(j);
                const CondValues v = cond_values(g.jet_at(i, j));
                sb.update(v.abs_b, x, y);
                sslope.update(v.slope2, x, y);
                scurv.update(v.curv, x, y);
                smixed.update(v.mixed, x, y);
            }
    }

    AdmissibilityReport r;
    r.mode = mode;
    r.sigma = sigma;
    r.eps = g.eps;
    r.conditions.push_back({"max|B| < 1/4", sb.value, 0.25, sb.x, sb.y});
    r.conditions.push_back({"max|grad B|^2 < 1/8", sslope.value, 0.125, sslope.x, sslope.y});
    if (mode == AdmissMode::Theorem1) {
        r.conditions.push_back(
            {"max(2|K_A| + sqrt|K_G|) < 8/27", scurv.value, 8.0 / 27.0, scurv.x, scurv.y});
    } else {
        r.conditions.push_back({"max(|K_A| + sqrt|K_G| + |grad B|) < eps^sigma", smixed.value,
                                std::pow(g.eps, sigma), smixed.x, smixed.y});
    }
    r.pass = true;
    for (const auto& c : r.conditions) r.pass = r.pass && c.pass();
    return r;
}

std::string AdmissibilityReport::summary() const {
    std::ostringstream os;
    os << "admissibility [" << (mode == AdmissMode::Theorem1 ? "theorem-1" : "theorem-2") << "] "
       << (pass ? "PASS" : "FAIL") << "\n";
    for (const auto& c : conditions) {
        os << "  " << (c.pass() ? "ok  " : "FAIL") << "  " << c.name << "  value=" << c.value
           << " threshold=" << c.threshold << " at (" << c.at_x << ", " << c.at_y << ")\n";
    }
    return os.str();
}

}  // namespace ekman
