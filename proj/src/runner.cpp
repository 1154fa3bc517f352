/// @file runner.cpp
/// @brief Subcommand drivers turning configurations into artifacts.

#include "ekman/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "ekman/assembler.hpp"
#include "ekman/diag_pack.hpp"
#include "ekman/limit2d.hpp"
#include "ekman/manifest.hpp"
#include "ekman/svgplot.hpp"
#include "ekman/verify.hpp"

namespace ekman {

namespace {

std::string config_hash(const ScenarioConfig& cfg) {
    return hash_hex(fnv1a64(cfg.canonical()));
}

std::string num(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

/// Pass/fail bookkeeping shared by every subcommand. A miss is fatal when
/// the command is a check by nature or verify.strict is set; otherwise it
/// stays advisory and the run still passes.
struct Checks {
    struct Item {
        std::string cls, detail;
        bool ok;
    };
    std::vector<Item> items;

    void add(const std::string& cls, bool ok, const std::string& detail) {
        items.push_back({cls, detail, ok});
    }
    bool all_ok() const {
        return std::all_of(items.begin(), items.end(), [](const Item& i) { return i.ok; });
    }
    std::string failed_classes() const {
        std::string out;
        for (const auto& i : items)
            if (!i.ok) out += (out.empty() ? "" : ", ") + i.cls;
        return out;
    }
};

RunResult finish(std::ostringstream& os, const Checks& ck, bool fatal_misses) {
    for (const auto& i : ck.items)
        os << "  check " << i.cls << ": " << (i.ok ? "ok" : "MISS") << " (" << i.detail
           << ")\n";
    RunResult r;
    if (ck.all_ok()) {
        os << "RESULT: PASS\n";
    } else if (fatal_misses) {
        os << "RESULT: FAIL (" << ck.failed_classes() << ")\n";
        r.exit_code = 1;
    } else {
        os << "RESULT: PASS (advisory: " << ck.failed_classes() << ")\n";
    }
    r.report = os.str();
    return r;
}

std::string out_dir(const ScenarioConfig& cfg) {
    std::filesystem::create_directories(cfg.output);
    return cfg.output;
}

void write_manifest(const std::string& dir, const std::string& command,
                    const ScenarioConfig& cfg, const std::vector<std::string>& names) {
    Manifest m;
    m.command = command;
    m.config_hash = config_hash(cfg);
    for (const auto& n : names) m.add_file(dir, n);
    m.write(dir + "/manifest.json");
}

GeometryBundle make_geometry(const ScenarioConfig& cfg) {
    SurfaceField sf = build_surface(cfg.grid(), cfg.surface());
    return derive_geometry(sf, cfg.nu, cfg.eps());
}

/// Shared header line of every report.
void head(std::ostringstream& os, const char* cmd, const ScenarioConfig& cfg) {
    os << cmd << ": surface=" << cfg.surface_preset << " data=" << cfg.data_preset
       << " grid=" << cfg.nx << "x" << cfg.ny << "x" << cfg.n_zeta << " nu=" << num(cfg.nu)
       << " eps=" << num(cfg.eps()) << " [config " << config_hash(cfg) << "]\n";
}

/// Admissibility gate used by every command that integrates or assembles.
/// Returns true when the run may proceed; otherwise fills in a FAIL result.
bool admissibility_gate(const ScenarioConfig& cfg, const GeometryBundle& geo,
                        std::ostringstream& os, RunResult& fail) {
    AdmissibilityReport rep = check_admissibility(geo, cfg.admiss_mode(), cfg.sigma);
    if (rep.pass) return true;
    os << rep.summary();
    os << "RESULT: FAIL (admissibility)\n";
    fail.exit_code = 1;
    fail.report = os.str();
    return false;
}

// ----------------------------------------------------------------------
// CSV reading for the plot command
// ----------------------------------------------------------------------

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return static_cast<int>(c);
        return -1;
    }
    std::vector<double> values(int c) const {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

Csv parse_csv(const std::string& text, const std::string& origin) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(origin + ": empty file, expected a CSV header");
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) csv.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (row.size() != csv.header.size())
            throw std::runtime_error(origin + ": row with " + std::to_string(row.size()) +
                                     " cells under a " + std::to_string(csv.header.size()) +
                                     "-column header");
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

}  // namespace

// ----------------------------------------------------------------------
// geometry-check
// ----------------------------------------------------------------------

RunResult run_geometry_check(const ScenarioConfig& cfg) {
    const std::string dir = out_dir(cfg);
    GeometryBundle geo = make_geometry(cfg);
    std::ostringstream os;
    head(os, "geometry-check", cfg);

    struct Identity {
        const char* name;
        double threshold;
        double worst = 0.0;
    };
    Identity ids[] = {
        {"det H0 cos^2(gamma) - 1", 1e-12},
        {"cos_alpha + Bx cos_gamma", 1e-12},
        {"cos_beta + By cos_gamma", 1e-12},
        {"direction cosine norm - 1", 1e-12},
        {"delta_n - delta cos_gamma", 1e-12},
        {"singular prefactor balance", 1e-10},
        {"coupling matrix squares to -I", 1e-12},
        {"diagonalization residual", 1e-10},
        {"closed-form vs numeric eigenvectors", 1e-8},
    };

    const Eigen::Matrix2d ident = Eigen::Matrix2d::Identity();
    for (int j = 0; j < geo.grid.ny; ++j)
        for (int i = 0; i < geo.grid.nx; ++i) {
            const PointGeometry p = geo.point(i, j);
            const double cg = p.cos_gamma;
            auto track = [&](int k, double v) { ids[k].worst = std::max(ids[k].worst, std::abs(v)); };
            track(0, p.det_h0 * cg * cg - 1.0);
            track(1, p.cos_alpha + p.jet.bx * cg);
            track(2, p.cos_beta + p.jet.by * cg);
            track(3, p.cos_alpha * p.cos_alpha + p.cos_beta * p.cos_beta + cg * cg - 1.0);
            track(4, p.delta_n - p.delta * cg);
            track(5, geo.nu * geo.eps * geo.eps * p.det_h0 / (p.delta * p.delta * cg) - 1.0);
            const Eigen::Matrix2d m = layer_coupling_matrix(p);
            track(6, (m * m + ident).cwiseAbs().maxCoeff());
            const DiagPoint closed = diag_closed_form(p);
            track(7, std::max(closed.residual_diag, closed.residual_id));
            track(8, compare_packs(closed, diag_numeric(p)).direction_residual);
        }

    Checks ck;
    for (const auto& id : ids) {
        os << "  worst |" << id.name << "| = " << num(id.worst, "%.17g") << "\n";
        ck.add("geometry-identity", id.worst <= id.threshold,
               std::string(id.name) + " = " + num(id.worst) + ", limit " + num(id.threshold));
    }

    AdmissibilityReport rep = check_admissibility(geo, cfg.admiss_mode(), cfg.sigma);
    os << rep.summary();
    ck.add("admissibility", rep.pass, rep.pass ? "all conditions hold" : "see conditions above");

    RunResult r = finish(os, ck, /*fatal_misses=*/true);
    write_text_file(dir + "/geometry.txt", r.report);
    write_manifest(dir, "geometry-check", cfg, {"geometry.txt"});
    return r;
}

// ----------------------------------------------------------------------
// simulate
// ----------------------------------------------------------------------

RunResult run_simulate(const ScenarioConfig& cfg) {
    const std::string dir = out_dir(cfg);
    GeometryBundle geo = make_geometry(cfg);
    std::ostringstream os;
    head(os, "simulate", cfg);

    RunResult gate;
    if (!admissibility_gate(cfg, geo, os, gate)) {
        write_text_file(dir + "/simulate.txt", gate.report);
        write_manifest(dir, "simulate", cfg, {"simulate.txt"});
        return gate;
    }

    LimitSolver solver(geo);
    solver.set_initial(cfg.initial_data());

    double dt0 = cfg.dt > 0.0 ? cfg.dt : solver.cfl_dt(0.5);
    if (!std::isfinite(dt0) || dt0 <= 0.0) dt0 = cfg.horizon / 100.0;
    dt0 = std::min(dt0, cfg.horizon);
    const int n_steps = std::max(1, static_cast<int>(std::ceil(cfg.horizon / dt0 - 1e-9)));
    const double dt = cfg.horizon / n_steps;

    std::vector<NormSample> traj;
    traj.push_back(solver.sample());
    double rot_max = std::abs(solver.rotation_energy(solver.velocity()));
    for (int k = 1; k <= n_steps; ++k) {
        solver.step(dt);
        if (k % cfg.stride == 0 || k == n_steps) {
            traj.push_back(solver.sample());
            rot_max = std::max(rot_max, std::abs(solver.rotation_energy(solver.velocity())));
        }
    }
    write_norms_csv(dir + "/norms.csv", traj);

    os << "  steps=" << n_steps << " dt=" << num(dt) << " samples=" << traj.size() << "\n";
    os << "  |u|_L2 " << num(traj.front().l2_u) << " -> " << num(traj.back().l2_u) << "\n";
    os << "  max |rotation energy quadrature| = " << num(rot_max, "%.3e") << "\n";

    Checks ck;
    const double energy0 = traj.front().l2_u * traj.front().l2_u;
    ck.add("rotation", rot_max <= 1e-10 * std::max(1.0, energy0),
           "max " + num(rot_max, "%.3e") + " vs " + num(1e-10 * std::max(1.0, energy0), "%.3e"));
    ck.add("decay", traj.back().l2_u <= traj.front().l2_u * (1.0 + 1e-12),
           "|u|_L2 " + num(traj.front().l2_u) + " -> " + num(traj.back().l2_u));

    const bool flat = geo.bx.max_abs() == 0.0 && geo.by.max_abs() == 0.0;
    if (traj.size() >= 10) {
        DecayReport fits = decay_diagnostics(traj, cfg.nu);
        os << fits.summary();
        if (flat && fits.l2_u.fitted) {
            const double expected = std::sqrt(2.0 * cfg.nu);
            ck.add("flat-rate",
                   std::abs(fits.energy_rate - expected) <= cfg.tol_flat_rate * expected,
                   "energy rate " + num(fits.energy_rate, "%.6g") + " vs sqrt(2 nu) = " +
                       num(expected, "%.6g"));
        }
    } else {
        os << "  too few samples to fit decay rates (reduce time.stride)\n";
    }

    RunResult r = finish(os, ck, cfg.strict);
    write_text_file(dir + "/simulate.txt", r.report);
    write_manifest(dir, "simulate", cfg, {"norms.csv", "simulate.txt"});
    return r;
}

// ----------------------------------------------------------------------
// reconstruct
// ----------------------------------------------------------------------

RunResult run_reconstruct(const ScenarioConfig& cfg) {
    const std::string dir = out_dir(cfg);
    GeometryBundle geo = make_geometry(cfg);
    std::ostringstream os;
    head(os, "reconstruct", cfg);

    RunResult gate;
    if (!admissibility_gate(cfg, geo, os, gate)) {
        write_text_file(dir + "/reconstruct.txt", gate.report);
        write_manifest(dir, "reconstruct", cfg, {"reconstruct.txt"});
        return gate;
    }

    LimitSolver solver(geo);
    solver.set_initial(cfg.initial_data());

    AssemblyOptions opts;
    opts.n_zeta = cfg.n_zeta;
    ApproxSolution s = assemble_approx(solver, opts);
    save_snapshot(s, dir + "/approx.snap");

    // layer profiles at the steepest point of the surface (origin when flat)
    int pi = 0, pj = 0;
    double steepest = -1.0;
    for (int j = 0; j < geo.grid.ny; ++j)
        for (int i = 0; i < geo.grid.nx; ++i) {
            const double sl = geo.bx(i, j) * geo.bx(i, j) + geo.by(i, j) * geo.by(i, j);
            if (sl > steepest) {
                steepest = sl;
                pi = i;
                pj = j;
            }
        }
    std::ostringstream pcsv;
    write_profile_csv(pcsv, s.bottom, pi, pj, s.axis);
    write_text_file(dir + "/profiles.csv", pcsv.str());

    double wall_max = 0.0;
    const int nz = s.u1.nz();
    for (const Field3D* f : {&s.u1, &s.u2, &s.u3})
        for (int q : {0, nz - 1})
            for (int j = 0; j < geo.grid.ny; ++j)
                for (int i = 0; i < geo.grid.nx; ++i)
                    wall_max = std::max(wall_max, std::abs(f->at(i, j, q)));
    const double u_linf = std::max(s.u_bar.x.max_abs(), s.u_bar.y.max_abs());
    const double dist = approx_minus_limit_l2(s);

    os << "  profiles sampled at grid point (" << pi << ", " << pj << ")\n";
    os << "  divergence defect " << num(s.info.defect_l2, "%.6g")
       << " (Linf " << num(s.info.defect_linf, "%.6g") << "), closure residual "
       << num(s.info.closure_l2, "%.3e") << "\n";
    os << "  wall trace max " << num(wall_max, "%.3e") << ", |u_bar|_Linf " << num(u_linf)
       << "\n";
    os << "  corrector max |V| = "
       << num(std::max({s.v1.max_abs(), s.v2.max_abs(), s.v3.max_abs()}), "%.6g") << "\n";
    os << "  || U_app - limit ||_L2 = " << num(dist) << "\n";

    Checks ck;
    ck.add("divergence", s.info.closure_l2 < 1e-6,
           "closure residual " + num(s.info.closure_l2, "%.3e") + " vs 1e-6");
    ck.add("wall", wall_max < 1e-6 * std::max(u_linf, 1e-30),
           "wall trace " + num(wall_max, "%.3e") + " vs 1e-6 |u_bar|_Linf");

    RunResult r = finish(os, ck, cfg.strict);
    write_text_file(dir + "/reconstruct.txt", r.report);
    write_manifest(dir, "reconstruct", cfg, {"approx.snap", "profiles.csv", "reconstruct.txt"});
    return r;
}

// ----------------------------------------------------------------------
// residual-sweep
// ----------------------------------------------------------------------

RunResult run_residual_sweep(const ScenarioConfig& cfg) {
    if (cfg.nx != cfg.ny)
        throw std::invalid_argument(
            "residual-sweep uses a square horizontal grid; set grid.nx = grid.ny");
    const std::string dir = out_dir(cfg);
    std::ostringstream os;
    head(os, "residual-sweep", cfg);

    SweepScenario sc;
    sc.n = cfg.nx;
    sc.lx = cfg.lx;
    sc.ly = cfg.ly;
    sc.surface = cfg.surface();
    sc.nu = cfg.nu;
    sc.data = cfg.initial_data();
    sc.assembly.n_zeta = cfg.n_zeta;

    SweepTable table = convergence_sweep(sc, cfg.eps_list);
    write_text_file(dir + "/sweep.csv", table.csv());
    os << table.summary();

    Checks ck;
    ck.add("sweep-incomplete", table.complete,
           table.complete ? "all rows assembled" : table.error);
    if (table.complete) {
        bool mono_d = true, mono_r = true;
        for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
            mono_d = mono_d && table.rows[i + 1].distance < table.rows[i].distance;
            mono_r = mono_r && table.rows[i + 1].rho < table.rows[i].rho;
        }
        ck.add("monotonicity", mono_d && mono_r,
               std::string("distance ") + (mono_d ? "decreasing" : "NOT decreasing") +
                   ", residual " + (mono_r ? "decreasing" : "NOT decreasing"));
        ck.add("sweep-slope", std::abs(table.slope_distance - 0.5) <= cfg.tol_slope,
               "distance slope " + num(table.slope_distance) + " vs 0.5 +- " +
                   num(cfg.tol_slope));
        ck.add("sweep-slope", table.slope_rho >= 0.4,
               "residual slope " + num(table.slope_rho) + " vs floor 0.4");
        double div_worst = 0.0, wall_worst = 0.0;
        for (const auto& row : table.rows) {
            div_worst = std::max(div_worst, row.div_residual);
            wall_worst = std::max(wall_worst, row.boundary_residual);
        }
        ck.add("divergence", div_worst < 1e-6, "worst " + num(div_worst, "%.3e") + " vs 1e-6");
        ck.add("wall", wall_worst < 1e-6, "worst " + num(wall_worst, "%.3e") + " vs 1e-6");
    }

    RunResult r = finish(os, ck, /*fatal_misses=*/true);
    write_text_file(dir + "/sweep.txt", r.report);
    write_manifest(dir, "residual-sweep", cfg, {"sweep.csv", "sweep.txt"});
    return r;
}

// ----------------------------------------------------------------------
// decay-check
// ----------------------------------------------------------------------

RunResult run_decay_check(const ScenarioConfig& cfg) {
    const std::string dir = out_dir(cfg);
    GeometryBundle geo = make_geometry(cfg);
    std::ostringstream os;
    head(os, "decay-check", cfg);

    RunResult gate;
    if (!admissibility_gate(cfg, geo, os, gate)) {
        write_text_file(dir + "/decay.txt", gate.report);
        write_manifest(dir, "decay-check", cfg, {"decay.txt"});
        return gate;
    }

    DecayAssessment a = decay_check(geo, cfg.initial_data(), cfg.horizon);
    write_norms_csv(dir + "/norms.csv", a.trajectory);
    os << a.summary();

    Checks ck;
    ck.add("decay-rate", a.l2_ok, "L2 rate vs sqrt(2 nu)/8 floor");
    ck.add("gradient-rate", a.grad_ok, "late gradient rate vs 0.9 sqrt(nu/2)");
    if (a.flat)
        ck.add("flat-rate", a.flat_ok,
               "energy rate vs exact " + num(a.flat_expected, "%.6g"));

    RunResult r = finish(os, ck, /*fatal_misses=*/true);
    write_text_file(dir + "/decay.txt", r.report);
    write_manifest(dir, "decay-check", cfg, {"norms.csv", "decay.txt"});
    return r;
}

// ----------------------------------------------------------------------
// plot
// ----------------------------------------------------------------------

namespace {

std::string plot_norms(const ScenarioConfig& cfg, const std::string& dir) {
    Csv csv = parse_csv(read_text_file(dir + "/norms.csv"), "norms.csv");
    const int ct = csv.column("t"), cu = csv.column("L2_u"), cw = csv.column("L2_omega");
    if (ct < 0 || cu < 0 || cw < 0)
        throw std::runtime_error("norms.csv: expected columns t, L2_u, L2_omega");

    std::vector<PlotSeries> series;
    series.push_back({"|u| L2", csv.values(ct), csv.values(cu), false});
    series.push_back({"|curl u| L2", csv.values(ct), csv.values(cw), false});
    if (!csv.rows.empty()) {
        const double rate = std::sqrt(2.0 * cfg.nu) / 8.0;
        const double t0 = csv.rows.front()[ct], a0 = csv.rows.front()[cu];
        PlotSeries ref{"guaranteed floor exp(-sqrt(2 nu)/8 t)", csv.values(ct), {}, true};
        for (double t : ref.x) ref.y.push_back(a0 * std::exp(-rate * (t - t0)));
        series.push_back(std::move(ref));
    }
    SvgOptions opt;
    opt.title = "norm decay";
    opt.xlabel = "t";
    opt.ylabel = "norm (log scale)";
    opt.logy = true;
    opt.footer = "config " + config_hash(cfg);
    const std::string svg = svg_line_plot(series, opt);
    write_text_file(dir + "/decay.svg", svg);
    return "decay.svg";
}

std::string plot_spiral(const ScenarioConfig& cfg, const std::string& dir) {
    Csv csv = parse_csv(read_text_file(dir + "/profiles.csv"), "profiles.csv");
    const int c01 = csv.column("u0_1"), c02 = csv.column("u0_2");
    const int c11 = csv.column("u1_1"), c12 = csv.column("u1_2");
    if (c01 < 0 || c02 < 0 || c11 < 0 || c12 < 0)
        throw std::runtime_error("profiles.csv: expected columns u0_1, u0_2, u1_1, u1_2");

    std::vector<PlotSeries> series;
    series.push_back({"leading order", csv.values(c01), csv.values(c02), false});
    series.push_back({"first correction", csv.values(c11), csv.values(c12), false});
    SvgOptions opt;
    opt.title = "wall-layer hodograph";
    opt.xlabel = "u1";
    opt.ylabel = "u2";
    opt.footer = "config " + config_hash(cfg);
    write_text_file(dir + "/spiral.svg", svg_line_plot(series, opt));
    return "spiral.svg";
}

std::string plot_slice(const ScenarioConfig& cfg, const std::string& dir) {
    Snapshot snap = load_snapshot(dir + "/approx.snap");
    const double target = std::min(3.0 * std::sqrt(snap.nu * snap.eps), 0.2);
    int qbest = 1;
    for (int q = 1; q < snap.u1.nz(); ++q)
        if (std::abs(snap.zeta[q] - target) < std::abs(snap.zeta[qbest] - target)) qbest = q;

    std::vector<double> v(snap.grid.size());
    for (int j = 0; j < snap.grid.ny; ++j)
        for (int i = 0; i < snap.grid.nx; ++i)
            v[i + static_cast<std::size_t>(snap.grid.nx) * j] = snap.u1.at(i, j, qbest);

    SvgOptions opt;
    opt.title = "u1 on the zeta = " + num(snap.zeta[qbest], "%.4g") + " plane";
    opt.xlabel = "x";
    opt.ylabel = "y";
    opt.footer = "config " + config_hash(cfg);
    write_text_file(dir + "/slice.svg", svg_heatmap(v, snap.grid.nx, snap.grid.ny, opt));
    return "slice.svg";
}

}  // namespace

RunResult run_plot(const ScenarioConfig& cfg, const std::string& artifact) {
    if (artifact != "all" && artifact != "norms" && artifact != "spiral" &&
        artifact != "slice")
        throw std::invalid_argument("unknown plot artifact '" + artifact +
                                    "' (choose all, norms, spiral, slice)");
    const std::string dir = out_dir(cfg);
    std::ostringstream os;
    head(os, "plot", cfg);

    std::vector<std::string> produced;
    auto have = [&dir](const char* f) { return std::filesystem::exists(dir + "/" + f); };
    if (artifact == "norms" || (artifact == "all" && have("norms.csv")))
        produced.push_back(plot_norms(cfg, dir));
    if (artifact == "spiral" || (artifact == "all" && have("profiles.csv")))
        produced.push_back(plot_spiral(cfg, dir));
    if (artifact == "slice" || (artifact == "all" && have("approx.snap")))
        produced.push_back(plot_slice(cfg, dir));
    if (produced.empty())
        throw std::runtime_error("nothing to plot in '" + dir +
                                 "': run simulate, reconstruct, or decay-check first");

    for (const auto& p : produced) os << "  wrote " << p << "\n";
    os << "RESULT: PASS\n";
    write_manifest(dir, "plot", cfg, produced);
    RunResult r;
    r.report = os.str();
    return r;
}

// ----------------------------------------------------------------------
// dispatch
// ----------------------------------------------------------------------

RunResult run_subcommand(const std::string& name, const ScenarioConfig& cfg,
                         const std::string& artifact) {
    if (name == "geometry-check") return run_geometry_check(cfg);
    if (name == "simulate") return run_simulate(cfg);
    if (name == "reconstruct") return run_reconstruct(cfg);
    if (name == "residual-sweep") return run_residual_sweep(cfg);
    if (name == "decay-check") return run_decay_check(cfg);
    if (name == "plot") return run_plot(cfg, artifact);
    throw std::invalid_argument("unknown subcommand '" + name +
                                "' (choose geometry-check, simulate, reconstruct, "
                                "residual-sweep, decay-check, plot)");
}

}  // namespace ekman
