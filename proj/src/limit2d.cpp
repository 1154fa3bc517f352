/// @file limit2d.cpp
/// @brief Pseudo-spectral integrator for the 2D damped-rotational limit flow.

#include "ekman/limit2d.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <stdexcept>

namespace ekman {

// ============================================================================
// Initial data
// ============================================================================

InitialData InitialData::taylor_green(double amp) {
    InitialData d;
    d.preset = Preset::TaylorGreen;
    d.amplitude = amp;
    return d;
}

InitialData InitialData::band_random(double amp, unsigned long long seed) {
    InitialData d;
    d.preset = Preset::BandRandom;
    d.amplitude = amp;
    d.seed = seed;
    return d;
}

InitialData InitialData::bump(double amp) {
    InitialData d;
    d.preset = Preset::Bump;
    d.amplitude = amp;
    return d;
}

std::string InitialData::name() const {
    switch (preset) {
        case Preset::TaylorGreen: return "taylor-green";
        case Preset::BandRandom: return "band-limited-random";
        case Preset::Bump: return "bump";
    }
    return "?";
}

// ============================================================================
// Solver setup
// ============================================================================

LimitSolver::LimitSolver(const GeometryBundle& geo)
    : geo_(&geo),
      ws_(geo.grid),
      u_(geo.grid),
      c_(geo.grid),
      d11_(geo.grid),
      d12_(geo.grid),
      d21_(geo.grid),
      d22_(geo.grid),
      m11_(geo.grid),
      m12_(geo.grid),
      m21_(geo.grid),
      m22_(geo.grid),
      sa_(geo.grid),
      sb_(geo.grid),
      sc_(geo.grid) {
    const double nu = geo.nu;
    if (!(nu > 0.0)) throw std::invalid_argument("LimitSolver: viscosity must be positive");
    for (std::size_t k = 0; k < c_.size(); ++k) {
        const double cg = geo.cos_gamma[k];
        const double bx = geo.bx[k], by = geo.by[k];
        const double bxx = geo.bxx[k], bxy = geo.bxy[k], byy = geo.byy[k];
        const double c = std::sqrt(nu / (2.0 * cg));
        c_[k] = c;
        // damping-rotation matrix D = c (H0 - cg^-1 E1)
        d11_[k] = c * (1.0 + bx * bx);
        d12_[k] = c * (bx * by - 1.0 / cg);
        d21_[k] = c * (bx * by + 1.0 / cg);
        d22_[k] = c * (1.0 + by * by);
        // curvature-source matrix ka*I - 3/2 cg H - 3/2 cg^2 E1 H; together
        // with the slope planes below this makes the scalar tendency the
        // exact curl of the momentum tendency (checked by the
        // cross-formulation test).
        m11_[k] = geo.ka[k] - 1.5 * cg * bxx - 1.5 * cg * cg * bxy;
        m12_[k] = -1.5 * cg * bxy - 1.5 * cg * cg * byy;
        m21_[k] = -1.5 * cg * bxy + 1.5 * cg * cg * bxx;
        m22_[k] = geo.ka[k] - 1.5 * cg * byy + 1.5 * cg * cg * bxy;
        sa_[k] = bx * bx;
        sb_[k] = 2.0 * bx * by;
        sc_[k] = by * by;
    }
    const AdmissibilityReport rep = check_admissibility(geo, AdmissMode::Theorem1);
    admissible_ = rep.pass;
    if (!admissible_) {
        std::string bad;
        for (const auto& cnd : rep.conditions)
            if (!cnd.pass()) bad += (bad.empty() ? "" : ", ") + cnd.name;
        std::fprintf(stderr, "limit2d: warning: geometry is not admissible (%s); integrating anyway\n",
                     bad.c_str());
    }
}

void LimitSolver::set_velocity(const VecField2D& u) {
    if (u.grid() != grid()) throw std::invalid_argument("set_velocity: grid mismatch");
    u_ = u;
    ws_.project(u_);
    u_.x = ws_.dealias(u_.x);
    u_.y = ws_.dealias(u_.y);
}

void LimitSolver::set_initial(const InitialData& data) {
    const Grid2D& g = grid();
    VecField2D u(g);

    switch (data.preset) {
        case InitialData::Preset::TaylorGreen: {
            const double k1 = 2.0 * M_PI / g.lx, k2 = 2.0 * M_PI / g.ly;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    u.x(i, j) = data.amplitude * std::sin(k1 * g.x(i)) * std::cos(k2 * g.y(j));
                    u.y(i, j) = -data.amplitude * (k1 / k2) * std::cos(k1 * g.x(i)) * std::sin(k2 * g.y(j));
                }
            break;
        }
        case InitialData::Preset::Bump: {
            // stream-function bump at the box center; grad-perp keeps it
            // exactly divergence-free
            const double w2 = 0.35 * 0.35, cx = 0.5 * g.lx, cy = 0.5 * g.ly;
            Field2D psi(g);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double sx = std::sin(M_PI * (g.x(i) - cx) / g.lx);
                    const double sy = std::sin(M_PI * (g.y(j) - cy) / g.ly);
                    psi(i, j) = std::exp(-(sx * sx + sy * sy) / w2);
                }
            u.x = -1.0 * ws_.dy(psi);
            u.y = ws_.dx(psi);
            break;
        }
        case InitialData::Preset::BandRandom: {
            // random phases on a fixed low-mode band, spectral falloff
            // |k|^-(smoothness+1); conjugate symmetry on the kx = 0 column
            const int kmax = 4;
            SpecField2D ph(g);
            std::mt19937_64 rng(data.seed);
            auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
            for (int ki = 0; ki <= kmax; ++ki)
                for (int kj = -kmax; kj <= kmax; ++kj) {
                    if (ki == 0 && kj <= 0) continue;
                    const double r = 0.25 + 0.75 * unit();
                    const double th = 2.0 * M_PI * unit();
                    const double mag =
                        r / std::pow(static_cast<double>(ki * ki + kj * kj),
                                     0.5 * (data.smoothness + 1.0));
                    const std::complex<double> v = mag * std::polar(1.0, th);
                    const int j = kj < 0 ? g.ny + kj : kj;
                    ph(ki, j) = v;
                    if (ki == 0) ph(0, g.ny - kj) = std::conj(v);
                }
            const Field2D psi = ws_.inverse(ph);
            u.x = -1.0 * ws_.dy(psi);
            u.y = ws_.dx(psi);
            break;
        }
    }

    const double peak = linf_norm(u);
    if (peak > 0.0) {
        u.x *= data.amplitude / peak;
        u.y *= data.amplitude / peak;
    }
    if (data.vorticity_scale > 0.0) {
        const double wn = l2_norm(ws_.curl(u));
        if (wn > 0.0) {
            u.x *= data.vorticity_scale / wn;
            u.y *= data.vorticity_scale / wn;
        }
    }
    set_velocity(u);
    initial_omega_norm_ = l2_norm(ws_.curl(u_));
    t_ = 0.0;
}

// ============================================================================
// Velocity-form operators
// ============================================================================

void LimitSolver::check_finite(const VecField2D& f, const char* where) const {
    const double m = std::max(f.x.max_abs(), f.y.max_abs());
    if (std::isfinite(m)) return;
    const std::string path =
        (std::filesystem::temp_directory_path() / "ekman_nan_state.txt").string();
    std::ofstream out(path);
    if (out) {
        const Grid2D& g = grid();
        out << g.nx << " " << g.ny << " " << std::setprecision(17) << g.lx << " " << g.ly
            << " t " << t_ << "\n";
        for (std::size_t k = 0; k < u_.x.size(); ++k)
            out << u_.x[k] << " " << u_.y[k] << "\n";
    }
    throw std::runtime_error(std::string(where) + ": non-finite tendency at t = " +
                             std::to_string(t_) + "; state snapshot written to " + path);
}

VecField2D LimitSolver::advection(const VecField2D& u) const {
    const Field2D ux = ws_.dx(u.x), uy = ws_.dy(u.x);
    const Field2D vx = ws_.dx(u.y), vy = ws_.dy(u.y);
    VecField2D a(grid());
    for (std::size_t k = 0; k < a.x.size(); ++k) {
        a.x[k] = u.x[k] * ux[k] + u.y[k] * uy[k];
        a.y[k] = u.x[k] * vx[k] + u.y[k] * vy[k];
    }
    a.x = ws_.dealias(a.x);
    a.y = ws_.dealias(a.y);
    return a;
}

VecField2D LimitSolver::damping(const VecField2D& u) const {
    VecField2D d(grid());
    for (std::size_t k = 0; k < d.x.size(); ++k) {
        d.x[k] = d11_[k] * u.x[k] + d12_[k] * u.y[k];
        d.y[k] = d21_[k] * u.x[k] + d22_[k] * u.y[k];
    }
    d.x = ws_.dealias(d.x);
    d.y = ws_.dealias(d.y);
    return d;
}

void LimitSolver::momentum_terms(const VecField2D& u, VecField2D& adv, VecField2D& damp,
                                 VecField2D& grad_p) const {
    adv = advection(u);
    damp = damping(u);
    VecField2D f(grid());
    f.x = adv.x + damp.x;
    f.y = adv.y + damp.y;
    Field2D divf = ws_.divergence(f);
    divf *= -1.0;
    const Field2D p = ws_.poisson(divf);  // p = -lap^-1 div(adv + damp)
    grad_p = VecField2D(grid());
    grad_p.x = ws_.dx(p);
    grad_p.y = ws_.dy(p);
}

VecField2D LimitSolver::rhs(const VecField2D& u) const {
    VecField2D adv, damp, gp;
    momentum_terms(u, adv, damp, gp);
    VecField2D out(grid());
    for (std::size_t k = 0; k < out.x.size(); ++k) {
        out.x[k] = -(adv.x[k] + damp.x[k] + gp.x[k]);
        out.y[k] = -(adv.y[k] + damp.y[k] + gp.y[k]);
    }
    check_finite(out, "limit_rhs");
    return out;
}

VecField2D LimitSolver::rhs_linearized(const VecField2D& u, const VecField2D& v) const {
    const Field2D ux = ws_.dx(u.x), uy = ws_.dy(u.x), vx = ws_.dx(u.y), vy = ws_.dy(u.y);
    const Field2D px = ws_.dx(v.x), py = ws_.dy(v.x), qx = ws_.dx(v.y), qy = ws_.dy(v.y);
    VecField2D f(grid());
    for (std::size_t k = 0; k < f.x.size(); ++k) {
        // (v.grad)u + (u.grad)v
        f.x[k] = v.x[k] * ux[k] + v.y[k] * uy[k] + u.x[k] * px[k] + u.y[k] * py[k];
        f.y[k] = v.x[k] * vx[k] + v.y[k] * vy[k] + u.x[k] * qx[k] + u.y[k] * qy[k];
    }
    f.x = ws_.dealias(f.x);
    f.y = ws_.dealias(f.y);
    const VecField2D damp = damping(v);
    f.x += damp.x;
    f.y += damp.y;
    Field2D divf = ws_.divergence(f);
    divf *= -1.0;
    const Field2D p = ws_.poisson(divf);
    VecField2D out(grid());
    out.x = -1.0 * (f.x + ws_.dx(p));
    out.y = -1.0 * (f.y + ws_.dy(p));
    return out;
}

void LimitSolver::pressure(const VecField2D& u, Field2D& p_out, Field2D& p0_out) const {
    VecField2D adv, damp, gp;
    momentum_terms(u, adv, damp, gp);
    VecField2D f(grid());
    f.x = adv.x + damp.x;
    f.y = adv.y + damp.y;
    Field2D divf = ws_.divergence(f);
    divf *= -1.0;
    p_out = ws_.poisson(divf);
    p0_out = ws_.poisson(ws_.curl(u));
}

Field2D LimitSolver::u3(const VecField2D& u) const {
    Field2D out(grid());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = geo_->bx[k] * u.x[k] + geo_->by[k] * u.y[k];
    return out;
}

// ============================================================================
// Time stepping
// ============================================================================

double LimitSolver::cfl_dt(double safety) const {
    const double s =
        M_PI * (u_.x.max_abs() / grid().dx() + u_.y.max_abs() / grid().dy());
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    return safety * 2.0 * std::sqrt(2.0) / s;  // RK4 imaginary-axis stability extent
}

namespace {
VecField2D axpy(const VecField2D& base, double a, const VecField2D& k) {
    VecField2D r = base;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        r.x[i] += a * k.x[i];
        r.y[i] += a * k.y[i];
    }
    return r;
}
}  // namespace

void LimitSolver::step(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const double bound = cfl_dt(1.0);
    if (dt > bound)
        throw std::runtime_error("step: dt = " + std::to_string(dt) +
                                 " exceeds the advective CFL bound; the largest stable step is " +
                                 std::to_string(bound));
    const VecField2D k1 = rhs(u_);
    const VecField2D k2 = rhs(axpy(u_, 0.5 * dt, k1));
    const VecField2D k3 = rhs(axpy(u_, 0.5 * dt, k2));
    const VecField2D k4 = rhs(axpy(u_, dt, k3));
    for (std::size_t i = 0; i < u_.x.size(); ++i) {
        u_.x[i] += dt / 6.0 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
        u_.y[i] += dt / 6.0 * (k1.y[i] + 2.0 * k2.y[i] + 2.0 * k3.y[i] + k4.y[i]);
    }
    ws_.project(u_);  // sweep up round-off divergence
    t_ += dt;
}

// ============================================================================
// Vorticity form
// ============================================================================

Field2D LimitSolver::vorticity(const VecField2D& u) const { return ws_.curl(u); }

VecField2D LimitSolver::velocity_from_vorticity(const Field2D& omega) const {
    const double m = ws_.mean(omega);
    if (std::abs(m) > 1e-10 * std::max(1.0, omega.max_abs()))
        throw std::invalid_argument("velocity_from_vorticity: omega has nonzero mean " +
                                    std::to_string(m) + "; a curl on the periodic box is mean-free");
    const Field2D psi = ws_.poisson(omega);
    VecField2D u(grid());
    u.x = -1.0 * ws_.dy(psi);
    u.y = ws_.dx(psi);
    return u;
}

VorticityState LimitSolver::make_vorticity_state(const VecField2D& u, double t) const {
    VorticityState s;
    s.omega = ws_.curl(u);
    const double m = ws_.mean(s.omega);
    for (std::size_t k = 0; k < s.omega.size(); ++k) s.omega[k] -= m;
    s.mean_u = {ws_.mean(u.x), ws_.mean(u.y)};
    s.t = t;
    return s;
}

VecField2D LimitSolver::velocity_of(const VorticityState& s) const {
    VecField2D u = velocity_from_vorticity(s.omega);
    for (std::size_t k = 0; k < u.x.size(); ++k) {
        u.x[k] += s.mean_u[0];
        u.y[k] += s.mean_u[1];
    }
    return u;
}

Field2D LimitSolver::vorticity_rhs(const Field2D& omega,
                                   const std::array<double, 2>& mean_u) const {
    VecField2D u = velocity_from_vorticity(omega);
    for (std::size_t k = 0; k < u.x.size(); ++k) {
        u.x[k] += mean_u[0];
        u.y[k] += mean_u[1];
    }
    const Field2D wx = ws_.dx(omega), wy = ws_.dy(omega);
    const Field2D u1y = ws_.dy(u.x), u2y = ws_.dy(u.y), u2x = ws_.dx(u.y);
    Field2D out(grid());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double adv = u.x[k] * wx[k] + u.y[k] * wy[k];
        const double w1 = m11_[k] * u.x[k] + m12_[k] * u.y[k];
        const double w2 = m21_[k] * u.x[k] + m22_[k] * u.y[k];
        const double curv = c_[k] / geo_->cos_gamma[k] * (-geo_->by[k] * w1 + geo_->bx[k] * w2);
        const double slope = c_[k] * (sa_[k] * u1y[k] + sb_[k] * u2y[k] - sc_[k] * u2x[k]);
        out[k] = -(adv + c_[k] * omega[k] + curv - slope);
    }
    out = ws_.dealias(out);
    // the tendency of a curl is itself a curl, hence mean-free; subtract the
    // quadrature mean so round-off cannot accumulate into the k = 0 mode
    const double mb = ws_.mean(out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= mb;
    if (!std::isfinite(out.max_abs()))
        throw std::runtime_error("vorticity_rhs: non-finite tendency at t = " + std::to_string(t_));
    return out;
}

std::array<double, 2> LimitSolver::mean_velocity_rhs(const VecField2D& u) const {
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < u.x.size(); ++k) {
        sx += d11_[k] * u.x[k] + d12_[k] * u.y[k];
        sy += d21_[k] * u.x[k] + d22_[k] * u.y[k];
    }
    const double n = static_cast<double>(u.x.size());
    return {-sx / n, -sy / n};
}

void LimitSolver::step_vorticity(VorticityState& s, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("step_vorticity: dt must be positive");
    struct Slope {
        Field2D domega;
        std::array<double, 2> dmean;
    };
    auto eval = [&](const Field2D& om, const std::array<double, 2>& mu) {
        Slope sl;
        sl.domega = vorticity_rhs(om, mu);
        sl.dmean = mean_velocity_rhs([&] {
            VecField2D u = velocity_from_vorticity(om);
            for (std::size_t k = 0; k < u.x.size(); ++k) {
                u.x[k] += mu[0];
                u.y[k] += mu[1];
            }
            return u;
        }());
        return sl;
    };
    auto shifted = [&](const Slope& sl, double a) {
        Field2D om = s.omega;
        for (std::size_t k = 0; k < om.size(); ++k) om[k] += a * sl.domega[k];
        std::array<double, 2> mu = {s.mean_u[0] + a * sl.dmean[0], s.mean_u[1] + a * sl.dmean[1]};
        return std::make_pair(om, mu);
    };
    const Slope k1 = eval(s.omega, s.mean_u);
    auto s2 = shifted(k1, 0.5 * dt);
    const Slope k2 = eval(s2.first, s2.second);
    auto s3 = shifted(k2, 0.5 * dt);
    const Slope k3 = eval(s3.first, s3.second);
    auto s4 = shifted(k3, dt);
    const Slope k4 = eval(s4.first, s4.second);
    for (std::size_t k = 0; k < s.omega.size(); ++k)
        s.omega[k] += dt / 6.0 *
                      (k1.domega[k] + 2.0 * k2.domega[k] + 2.0 * k3.domega[k] + k4.domega[k]);
    for (int c = 0; c < 2; ++c)
        s.mean_u[c] +=
            dt / 6.0 * (k1.dmean[c] + 2.0 * k2.dmean[c] + 2.0 * k3.dmean[c] + k4.dmean[c]);
    s.t += dt;
}

// ============================================================================
// Energy accounting and diagnostics
// ============================================================================

double LimitSolver::rotation_energy(const VecField2D& u) const {
    double s = 0.0;
    for (std::size_t k = 0; k < u.x.size(); ++k) {
        const double r = c_[k] / geo_->cos_gamma[k];
        // rotation part of D applied to u is (-r u2, r u1)
        s += u.x[k] * (-r * u.y[k]) + u.y[k] * (r * u.x[k]);
    }
    return s * grid().dx() * grid().dy();
}

double LimitSolver::damping_energy(const VecField2D& u) const {
    double s = 0.0;
    for (std::size_t k = 0; k < u.x.size(); ++k)
        s += u.x[k] * (d11_[k] * u.x[k] + d12_[k] * u.y[k]) +
             u.y[k] * (d21_[k] * u.x[k] + d22_[k] * u.y[k]);
    return s * grid().dx() * grid().dy();
}

NormSample LimitSolver::sample() const {
    NormSample s;
    s.t = t_;
    s.l2_u = l2_norm(u_);
    s.l2_omega = l2_norm(ws_.curl(u_));
    s.linf_u = linf_norm(u_);
    const Field2D ux = ws_.dx(u_.x), uy = ws_.dy(u_.x), vx = ws_.dx(u_.y), vy = ws_.dy(u_.y);
    double m = 0.0;
    for (std::size_t k = 0; k < ux.size(); ++k)
        m = std::max(m, std::sqrt(ux[k] * ux[k] + uy[k] * uy[k] + vx[k] * vx[k] + vy[k] * vy[k]));
    s.linf_grad_u = m;
    return s;
}

// ============================================================================
// Decay fits and CSV output
// ============================================================================

DecayReport decay_diagnostics(const std::vector<NormSample>& traj, double nu) {
    if (traj.size() < 10)
        throw std::invalid_argument("decay_diagnostics: need at least 10 samples, got " +
                                    std::to_string(traj.size()));
    auto fit = [&](auto getter) {
        DecayFit f;
        double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
        for (const NormSample& s : traj) {
            const double v = getter(s);
            if (!(v > 1e-14)) return f;  // decayed to zero: skip the fit
            const double ly = std::log(v);
            st += s.t;
            sy += ly;
            stt += s.t * s.t;
            sty += s.t * ly;
        }
        const double n = static_cast<double>(traj.size());
        const double den = n * stt - st * st;
        if (den <= 0.0) return f;
        f.rate = -(n * sty - st * sy) / den;
        f.fitted = true;
        return f;
    };
    DecayReport rep;
    rep.l2_u = fit([](const NormSample& s) { return s.l2_u; });
    rep.l2_omega = fit([](const NormSample& s) { return s.l2_omega; });
    rep.linf_u = fit([](const NormSample& s) { return s.linf_u; });
    rep.linf_grad_u = fit([](const NormSample& s) { return s.linf_grad_u; });
    if (rep.l2_u.fitted) rep.energy_rate = 2.0 * rep.l2_u.rate;
    rep.ref_conservative = std::sqrt(2.0 * nu) / 8.0;
    rep.ref_gradient = std::sqrt(nu / 2.0);
    return rep;
}

std::string DecayReport::summary() const {
    char buf[512];
    auto line = [](char* p, std::size_t n, const char* name, const DecayFit& f) {
        return f.fitted ? std::snprintf(p, n, "  %-12s rate %.6g\n", name, f.rate)
                        : std::snprintf(p, n, "  %-12s (skipped, norm at zero)\n", name);
    };
    int o = std::snprintf(buf, sizeof buf, "decay rates (norm ~ e^(-r t)):\n");
    o += line(buf + o, sizeof buf - o, "L2(u)", l2_u);
    o += line(buf + o, sizeof buf - o, "L2(omega)", l2_omega);
    o += line(buf + o, sizeof buf - o, "Linf(u)", linf_u);
    o += line(buf + o, sizeof buf - o, "Linf(grad u)", linf_grad_u);
    std::snprintf(buf + o, sizeof buf - o,
                  "  reference lower bounds: L2 rate >= %.6g, grad rate ~ %.6g\n",
                  ref_conservative, ref_gradient);
    return buf;
}

void write_norms_csv(const std::string& path, const std::vector<NormSample>& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_norms_csv: cannot open " + path);
    out << "t,L2_u,L2_omega,Linf_u,Linf_grad_u\n";
    char buf[200];
    for (const NormSample& s : traj) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.l2_u, s.l2_omega,
                      s.linf_u, s.linf_grad_u);
        out << buf;
    }
}

}  // namespace ekman
