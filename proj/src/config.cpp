/// @file config.cpp
/// @brief Scenario configuration parsing, validation, and canonical output.

#include "ekman/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace ekman {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string join_errors(const std::vector<std::string>& errs) {
    std::ostringstream os;
    os << "invalid configuration (" << errs.size()
       << (errs.size() == 1 ? " problem)" : " problems)");
    for (const auto& e : errs) os << "\n  " << e;
    return os.str();
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

/// One raw assignment with enough context for error messages.
struct Entry {
    int line;
    std::string key, value;
};

class Parser {
  public:
    explicit Parser(std::vector<std::string>& errs) : errs_(errs) {}

    void fail(const Entry& e, const std::string& what) {
        std::ostringstream os;
        if (e.line > 0)
            os << "line " << e.line << ": ";
        else
            os << "override: ";
        os << e.key << ": " << what;
        errs_.push_back(os.str());
    }

    void read(const Entry& e, double& out) {
        const char* s = e.value.c_str();
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end == s || *end != '\0' || !std::isfinite(v))
            fail(e, "cannot parse '" + e.value + "' as a number");
        else
            out = v;
    }

    void read(const Entry& e, int& out) {
        const char* s = e.value.c_str();
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end == s || *end != '\0')
            fail(e, "cannot parse '" + e.value + "' as an integer");
        else
            out = static_cast<int>(v);
    }

    void read(const Entry& e, unsigned long long& out) {
        const char* s = e.value.c_str();
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end == s || *end != '\0' || e.value[0] == '-')
            fail(e, "cannot parse '" + e.value + "' as a non-negative integer");
        else
            out = v;
    }

    void read(const Entry& e, bool& out) {
        if (e.value == "true")
            out = true;
        else if (e.value == "false")
            out = false;
        else
            fail(e, "expected true or false, got '" + e.value + "'");
    }

    void read(const Entry& e, std::string& out) {
        if (e.value.empty())
            fail(e, "empty value");
        else
            out = e.value;
    }

    void read_list(const Entry& e, std::vector<double>& out) {
        std::vector<double> vals;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            const char* s = item.c_str();
            char* end = nullptr;
            double v = std::strtod(s, &end);
            if (item.empty() || end == s || *end != '\0' || !std::isfinite(v)) {
                fail(e, "cannot parse '" + item + "' as a number in the list");
                return;
            }
            vals.push_back(v);
        }
        if (vals.empty())
            fail(e, "empty list");
        else
            out = vals;
    }

  private:
    std::vector<std::string>& errs_;
};

void assign_key(Parser& p, ScenarioConfig& c, const Entry& e) {
    if (e.key == "surface")
        p.read(e, c.surface_preset);
    else if (e.key == "surface.c")
        p.read(e, c.surface_c);
    else if (e.key == "surface.amp")
        p.read(e, c.surface_amp);
    else if (e.key == "surface.width")
        p.read(e, c.surface_width);
    else if (e.key == "surface.kx")
        p.read(e, c.surface_kx);
    else if (e.key == "surface.ky")
        p.read(e, c.surface_ky);
    else if (e.key == "grid.nx")
        p.read(e, c.nx);
    else if (e.key == "grid.ny")
        p.read(e, c.ny);
    else if (e.key == "grid.nzeta")
        p.read(e, c.n_zeta);
    else if (e.key == "grid.lx")
        p.read(e, c.lx);
    else if (e.key == "grid.ly")
        p.read(e, c.ly);
    else if (e.key == "nu")
        p.read(e, c.nu);
    else if (e.key == "eps")
        p.read_list(e, c.eps_list);
    else if (e.key == "sigma")
        p.read(e, c.sigma);
    else if (e.key == "admissibility")
        p.read(e, c.admissibility);
    else if (e.key == "data")
        p.read(e, c.data_preset);
    else if (e.key == "data.amplitude")
        p.read(e, c.amplitude);
    else if (e.key == "data.seed")
        p.read(e, c.seed);
    else if (e.key == "data.smoothness")
        p.read(e, c.smoothness);
    else if (e.key == "time.horizon")
        p.read(e, c.horizon);
    else if (e.key == "time.dt")
        p.read(e, c.dt);
    else if (e.key == "time.stride")
        p.read(e, c.stride);
    else if (e.key == "verify.strict")
        p.read(e, c.strict);
    else if (e.key == "verify.tol_slope")
        p.read(e, c.tol_slope);
    else if (e.key == "verify.tol_flat_rate")
        p.read(e, c.tol_flat_rate);
    else if (e.key == "output")
        p.read(e, c.output);
    else
        p.fail(e, "unknown key");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error(join_errors(errs)), errors(std::move(errs)) {}

AdmissMode ScenarioConfig::admiss_mode() const {
    return admissibility == "theorem-2" ? AdmissMode::Theorem2 : AdmissMode::Theorem1;
}

SurfaceSpec ScenarioConfig::surface() const {
    if (surface_preset == "bump") return SurfaceSpec::bump(surface_amp, surface_width);
    if (surface_preset == "eggcarton")
        return SurfaceSpec::eggcarton(surface_amp, surface_kx, surface_ky);
    return SurfaceSpec::flat(surface_c);
}

InitialData ScenarioConfig::initial_data() const {
    if (data_preset == "band-random") return InitialData::band_random(amplitude, seed);
    if (data_preset == "bump") return InitialData::bump(amplitude);
    return InitialData::taylor_green(amplitude);
}

std::string ScenarioConfig::canonical() const {
    std::ostringstream os;
    os << "surface = " << surface_preset << "\n";
    os << "surface.c = " << fmt(surface_c) << "\n";
    os << "surface.amp = " << fmt(surface_amp) << "\n";
    os << "surface.width = " << fmt(surface_width) << "\n";
    os << "surface.kx = " << surface_kx << "\n";
    os << "surface.ky = " << surface_ky << "\n";
    os << "grid.nx = " << nx << "\n";
    os << "grid.ny = " << ny << "\n";
    os << "grid.nzeta = " << n_zeta << "\n";
    os << "grid.lx = " << fmt(lx) << "\n";
    os << "grid.ly = " << fmt(ly) << "\n";
    os << "nu = " << fmt(nu) << "\n";
    os << "eps = ";
    for (std::size_t i = 0; i < eps_list.size(); ++i)
        os << (i ? ", " : "") << fmt(eps_list[i]);
    os << "\n";
    os << "sigma = " << fmt(sigma) << "\n";
    os << "admissibility = " << admissibility << "\n";
    os << "data = " << data_preset << "\n";
    os << "data.amplitude = " << fmt(amplitude) << "\n";
    os << "data.seed = " << seed << "\n";
    os << "data.smoothness = " << fmt(smoothness) << "\n";
    os << "time.horizon = " << fmt(horizon) << "\n";
    os << "time.dt = " << fmt(dt) << "\n";
    os << "time.stride = " << stride << "\n";
    os << "verify.strict = " << (strict ? "true" : "false") << "\n";
    os << "verify.tol_slope = " << fmt(tol_slope) << "\n";
    os << "verify.tol_flat_rate = " << fmt(tol_flat_rate) << "\n";
    os << "output = " << output << "\n";
    return os.str();
}

ScenarioConfig parse_config(const std::string& text,
                            const std::vector<std::string>& overrides) {
    ScenarioConfig c;
    std::vector<std::string> errs;
    Parser p(errs);

    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) continue;

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "line " << line_no << ": expected 'key = value', got '" << line << "'";
            errs.push_back(os.str());
            continue;
        }
        Entry e{line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
        if (e.key.empty()) {
            std::ostringstream os;
            os << "line " << line_no << ": missing key before '='";
            errs.push_back(os.str());
            continue;
        }
        if (!seen.insert(e.key).second) {
            p.fail(e, "duplicate key");
            continue;
        }
        assign_key(p, c, e);
    }

    for (const auto& ov : overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos || trim(ov.substr(0, eq)).empty()) {
            errs.push_back("override '" + ov + "': expected key=value");
            continue;
        }
        // overrides deliberately skip the duplicate check: winning over the
        // file is their purpose
        assign_key(p, c, Entry{0, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1))});
    }

    // Range checks on the assembled config; defaults are valid, so a field
    // that failed to parse above does not also trip a confusing range error.
    auto range = [&errs](const std::string& key, const std::string& what) {
        errs.push_back(key + ": " + what);
    };
    if (c.surface_preset != "flat" && c.surface_preset != "bump" &&
        c.surface_preset != "eggcarton")
        range("surface", "unknown preset '" + c.surface_preset +
                             "' (grid runs support flat, bump, eggcarton)");
    if (c.surface_width <= 0.0) range("surface.width", "must be positive");
    if (c.surface_kx < 1 || c.surface_ky < 1)
        range("surface.kx/ky", "mode counts must be at least 1");
    for (const auto* d : {&c.nx, &c.ny}) {
        if (!is_pow2(*d) || *d < 8) {
            std::ostringstream os;
            os << (d == &c.nx ? "grid.nx" : "grid.ny") << " = " << *d
               << " is not a power of two at least 8 (the transforms need 2^k, k >= 3)";
            errs.push_back(os.str());
        }
    }
    if (c.n_zeta < 8) range("grid.nzeta", "need at least 8 wall-normal points");
    if (c.lx <= 0.0 || c.ly <= 0.0) range("grid.lx/ly", "box lengths must be positive");
    if (c.nu <= 0.0) range("nu", "viscosity must be positive");
    for (double e : c.eps_list)
        if (e <= 0.0) {
            range("eps", "all values must be positive");
            break;
        }
    for (std::size_t i = 0; i + 1 < c.eps_list.size(); ++i)
        if (c.eps_list[i] <= c.eps_list[i + 1]) {
            range("eps", "a sweep list must be strictly decreasing");
            break;
        }
    if (c.sigma <= 0.0 || c.sigma > 1.0) range("sigma", "must lie in (0, 1]");
    if (c.admissibility != "theorem-1" && c.admissibility != "theorem-2")
        range("admissibility", "expected theorem-1 or theorem-2, got '" + c.admissibility + "'");
    if (c.data_preset != "taylor-green" && c.data_preset != "band-random" &&
        c.data_preset != "bump")
        range("data", "unknown preset '" + c.data_preset +
                          "' (supported: taylor-green, band-random, bump)");
    if (c.amplitude < 0.0) range("data.amplitude", "must be non-negative");
    if (c.smoothness <= 0.0) range("data.smoothness", "must be positive");
    if (c.horizon <= 0.0) range("time.horizon", "must be positive");
    if (c.dt < 0.0) range("time.dt", "must be non-negative (0 = automatic)");
    if (c.stride < 1) range("time.stride", "must be at least 1");
    if (c.output.empty()) range("output", "must name a directory");

    if (!errs.empty()) throw ConfigError(std::move(errs));
    return c;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace ekman
