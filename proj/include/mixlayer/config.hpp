#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "mixlayer/closures.hpp"
#include "mixlayer/column.hpp"
#include "mixlayer/csv.hpp"
#include "mixlayer/equilibrium.hpp"
#include "mixlayer/errors.hpp"

namespace mixlayer {

/// Fully resolved run configuration. Every field has a documented default
/// except the forcing, which must be given explicitly (either vx/vy or ua/va,
/// plus q).
struct RunConfig {
    // [model]
    ClosureKind kind = ClosureKind::R224;
    std::string preset = "PP81";  ///< PP81 | OPA | custom
    Coefficients coeffs = kPP81;  ///< beta2 = 0 means model default

    // [constants]
    PhysicalConstants constants;
    double c_d = 1.3e-3;  ///< drag coefficient for the ua/va form

    // [forcing] resolved values
    double vx = 0.0, vy = 0.0, q = 0.0;

    // [boundary]
    BoundaryValues boundary;

    // [equilibrium]
    RangeSpec scan;

    // [stability]
    std::string sweep = "R";      ///< R | C
    std::string models = "config";  ///< config (just model.kind) | all
    double r_lo = -5.0, r_hi = 10.0;
    int r_points = 1000;
    double c_abs_lo = 1e-6, c_abs_hi = 1e2;
    int c_points = 50;
    std::string c_signs = "both";  ///< both | positive | negative

    // [column]
    int n = 200;
    double dt = 30.0, t_end = 864000.0, theta = 1.0, r_max = 1e6;
    std::string initial = "equilibrium";  ///< equilibrium | perturbed | file
    double amplitude = 1e-3;
    std::string shape = "random";  ///< random | lowest-mode
    std::string profile_file;
    int max_samples = 200;
    std::uint64_t seed = 0;

    // [validate]
    std::string v_grid = "default";  ///< default | comma-separated R list
    double v_dt = 2.0, v_t_end = 86400.0;
    int stationarity_steps = 10000;
    double v_amplitude = 1e-3;
    std::string v_shape = "random";
    double growth_threshold = 10.0;
    double late_window = 0.2;

    // [output]
    std::string out_dir = "out";
};

inline ClosureModel model_from(const RunConfig& c) {
    return ClosureModel(c.kind, c.coeffs);
}

inline Forcing forcing_from(const RunConfig& c) {
    return Forcing{c.vx, c.vy, c.q, c.constants};
}

inline SimConfig sim_config_from(const RunConfig& c) {
    SimConfig s{Grid{c.boundary.h, c.n}, c.boundary, model_from(c),
                forcing_from(c)};
    s.dt = c.dt;
    s.t_end = c.t_end;
    s.theta_scheme = c.theta;
    s.r_max = c.r_max;
    return s;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& v, const std::string& key,
                           int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "' (line " + std::to_string(line) +
                              "): cannot parse number '" + v + "'",
                          line, key);
    return x;
}

inline int parse_int(const std::string& v, const std::string& key, int line) {
    const double x = parse_double(v, key, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("key '" + key + "' (line " + std::to_string(line) +
                              "): expected an integer, got '" + v + "'",
                          line, key);
    return i;
}

}  // namespace detail

/// Parse the flat "key = value" configuration format ([section] headers, #
/// comments). Unknown sections or keys are hard errors naming the key and
/// line; so are missing required forcing keys.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;

    bool has_vx = false, has_vy = false, has_ua = false, has_va = false,
         has_q = false;
    double ua = 0.0, va = 0.0;
    bool explicit_a1 = false, explicit_b1 = false, explicit_a2 = false,
         explicit_b2 = false;
    double a1 = 0, b1 = 0, a2 = 0, b2 = 0;

    using Handler = std::function<void(const std::string&, int)>;
    std::map<std::string, Handler> keys;
    auto add_d = [&](const std::string& k, double& target) {
        keys[k] = [&target, k](const std::string& v, int line) {
            target = detail::parse_double(v, k, line);
        };
    };
    auto add_i = [&](const std::string& k, int& target) {
        keys[k] = [&target, k](const std::string& v, int line) {
            target = detail::parse_int(v, k, line);
        };
    };
    auto add_s = [&](const std::string& k, std::string& target) {
        keys[k] = [&target](const std::string& v, int) { target = v; };
    };

    keys["model.kind"] = [&](const std::string& v, int line) {
        const auto k = kind_by_name(v);
        if (!k)
            throw ConfigError("key 'model.kind' (line " + std::to_string(line) +
                                  "): unknown model '" + v +
                                  "' (expected R-2-1-3, R-2-3, R-2-2-4 or R-2-2)",
                              line, "model.kind");
        cfg.kind = *k;
    };
    keys["model.preset"] = [&](const std::string& v, int line) {
        if (v != "custom" && !preset_by_name(v))
            throw ConfigError("key 'model.preset' (line " +
                                  std::to_string(line) + "): unknown preset '" +
                                  v + "' (expected PP81, OPA or custom)",
                              line, "model.preset");
        cfg.preset = v;
    };
    keys["model.alpha1"] = [&](const std::string& v, int line) {
        a1 = detail::parse_double(v, "model.alpha1", line);
        explicit_a1 = true;
    };
    keys["model.beta1"] = [&](const std::string& v, int line) {
        b1 = detail::parse_double(v, "model.beta1", line);
        explicit_b1 = true;
    };
    keys["model.alpha2"] = [&](const std::string& v, int line) {
        a2 = detail::parse_double(v, "model.alpha2", line);
        explicit_a2 = true;
    };
    keys["model.beta2"] = [&](const std::string& v, int line) {
        b2 = detail::parse_double(v, "model.beta2", line);
        explicit_b2 = true;
    };

    add_d("constants.g", cfg.constants.g);
    add_d("constants.rho0", cfg.constants.rho0);
    add_d("constants.rho_a", cfg.constants.rho_a);
    add_d("constants.c_d", cfg.c_d);

    keys["forcing.vx"] = [&](const std::string& v, int line) {
        cfg.vx = detail::parse_double(v, "forcing.vx", line);
        has_vx = true;
    };
    keys["forcing.vy"] = [&](const std::string& v, int line) {
        cfg.vy = detail::parse_double(v, "forcing.vy", line);
        has_vy = true;
    };
    keys["forcing.ua"] = [&](const std::string& v, int line) {
        ua = detail::parse_double(v, "forcing.ua", line);
        has_ua = true;
    };
    keys["forcing.va"] = [&](const std::string& v, int line) {
        va = detail::parse_double(v, "forcing.va", line);
        has_va = true;
    };
    keys["forcing.q"] = [&](const std::string& v, int line) {
        cfg.q = detail::parse_double(v, "forcing.q", line);
        has_q = true;
    };

    add_d("boundary.u_b", cfg.boundary.ub);
    add_d("boundary.v_b", cfg.boundary.vb);
    add_d("boundary.rho_b", cfg.boundary.rhob);
    add_d("boundary.h", cfg.boundary.h);

    add_d("equilibrium.scan_lo", cfg.scan.lo);
    add_d("equilibrium.scan_hi", cfg.scan.hi);
    add_i("equilibrium.samples_per_interval", cfg.scan.samples_per_interval);

    add_s("stability.sweep", cfg.sweep);
    add_s("stability.models", cfg.models);
    add_d("stability.r_lo", cfg.r_lo);
    add_d("stability.r_hi", cfg.r_hi);
    add_i("stability.r_points", cfg.r_points);
    add_d("stability.c_abs_lo", cfg.c_abs_lo);
    add_d("stability.c_abs_hi", cfg.c_abs_hi);
    add_i("stability.c_points", cfg.c_points);
    add_s("stability.c_signs", cfg.c_signs);

    add_i("column.n", cfg.n);
    add_d("column.dt", cfg.dt);
    add_d("column.t_end", cfg.t_end);
    add_d("column.theta", cfg.theta);
    add_d("column.r_max", cfg.r_max);
    add_s("column.initial", cfg.initial);
    add_d("column.amplitude", cfg.amplitude);
    add_s("column.shape", cfg.shape);
    add_s("column.profile_file", cfg.profile_file);
    add_i("column.max_samples", cfg.max_samples);
    keys["column.seed"] = [&](const std::string& v, int line) {
        cfg.seed = static_cast<std::uint64_t>(
            detail::parse_double(v, "column.seed", line));
    };

    add_s("validate.grid", cfg.v_grid);
    add_d("validate.dt", cfg.v_dt);
    add_d("validate.t_end", cfg.v_t_end);
    add_i("validate.stationarity_steps", cfg.stationarity_steps);
    add_d("validate.amplitude", cfg.v_amplitude);
    add_s("validate.shape", cfg.v_shape);
    add_d("validate.growth_threshold", cfg.growth_threshold);
    add_d("validate.late_window", cfg.late_window);

    add_s("output.dir", cfg.out_dir);

    static const std::set<std::string> sections = {
        "model",  "constants", "forcing",  "boundary", "equilibrium",
        "stability", "column", "validate", "output"};

    std::istringstream in(text);
    std::string line;
    std::string section;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                      ": malformed section header '" + s + "'",
                                  lineno);
            section = detail::trim(s.substr(1, s.size() - 2));
            if (!sections.count(section))
                throw ConfigError("line " + std::to_string(lineno) +
                                      ": unknown section '" + section + "'",
                                  lineno, section);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(
                "line " + std::to_string(lineno) + ": expected key = value",
                lineno);
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key '" +
                                  key + "' outside any [section]",
                              lineno, key);
        const std::string full = section + "." + key;
        const auto it = keys.find(full);
        if (it == keys.end())
            throw ConfigError(
                "line " + std::to_string(lineno) + ": unknown key '" + full + "'",
                lineno, full);
        if (!seen.insert(full).second)
            throw ConfigError(
                "line " + std::to_string(lineno) + ": duplicate key '" + full + "'",
                lineno, full);
        it->second(value, lineno);
    }

    // resolve coefficients: preset base, explicit overrides on top
    if (cfg.preset == "custom") {
        if (!explicit_a1 || !explicit_b1 || !explicit_a2)
            throw ConfigError(
                "model.preset = custom requires model.alpha1, model.beta1 and "
                "model.alpha2",
                0, "model.alpha1");
        cfg.coeffs = Coefficients{a1, b1, a2, explicit_b2 ? b2 : 0.0};
    } else {
        cfg.coeffs = *preset_by_name(cfg.preset);
        if (explicit_a1) cfg.coeffs.alpha1 = a1;
        if (explicit_b1) cfg.coeffs.beta1 = b1;
        if (explicit_a2) cfg.coeffs.alpha2 = a2;
        if (explicit_b2) cfg.coeffs.beta2 = b2;
    }

    // resolve forcing
    if (has_ua || has_va) {
        if (has_vx || has_vy)
            throw ConfigError(
                "give either forcing.vx/forcing.vy or forcing.ua/forcing.va, "
                "not both",
                0, "forcing.vx");
        if (!(has_ua && has_va))
            throw ConfigError("missing required key 'forcing." +
                                  std::string(has_ua ? "va" : "ua") + "'",
                              0, has_ua ? "forcing.va" : "forcing.ua");
        cfg.vx = cfg.c_d * ua * ua;
        cfg.vy = cfg.c_d * va * va;
    } else {
        if (!has_vx || !has_vy)
            throw ConfigError(
                "missing required key 'forcing." +
                    std::string(!has_vx ? "vx" : "vy") +
                    "' (or give forcing.ua/forcing.va)",
                0, !has_vx ? "forcing.vx" : "forcing.vy");
    }
    if (!has_q)
        throw ConfigError("missing required key 'forcing.q'", 0, "forcing.q");

    // sanity checks
    auto positive = [&](double v, const std::string& k) {
        if (!(v > 0.0))
            throw ConfigError("key '" + k + "' must be > 0", 0, k);
    };
    positive(cfg.coeffs.alpha1, "model.alpha1");
    positive(cfg.coeffs.beta1, "model.beta1");
    positive(cfg.coeffs.alpha2, "model.alpha2");
    if (cfg.coeffs.beta2 < 0.0)
        throw ConfigError("key 'model.beta2' must be >= 0", 0, "model.beta2");
    positive(cfg.constants.g, "constants.g");
    positive(cfg.constants.rho0, "constants.rho0");
    positive(cfg.constants.rho_a, "constants.rho_a");
    positive(cfg.boundary.h, "boundary.h");
    positive(cfg.dt, "column.dt");
    positive(cfg.t_end, "column.t_end");
    positive(cfg.v_dt, "validate.dt");
    positive(cfg.v_t_end, "validate.t_end");
    if (cfg.n < 8)
        throw ConfigError("key 'column.n' must be >= 8", 0, "column.n");
    if (cfg.theta < 0.0 || cfg.theta > 1.0)
        throw ConfigError("key 'column.theta' must lie in [0, 1]", 0,
                          "column.theta");
    if (cfg.sweep != "R" && cfg.sweep != "C")
        throw ConfigError("key 'stability.sweep' must be R or C", 0,
                          "stability.sweep");
    if (cfg.models != "config" && cfg.models != "all")
        throw ConfigError("key 'stability.models' must be config or all", 0,
                          "stability.models");
    if (cfg.initial != "equilibrium" && cfg.initial != "perturbed" &&
        cfg.initial != "file")
        throw ConfigError(
            "key 'column.initial' must be equilibrium, perturbed or file", 0,
            "column.initial");
    if (cfg.initial == "file" && cfg.profile_file.empty())
        throw ConfigError(
            "column.initial = file requires column.profile_file", 0,
            "column.profile_file");
    for (const auto& [key, val] :
         {std::pair<std::string, std::string>{"column.shape", cfg.shape},
          {"validate.shape", cfg.v_shape}}) {
        if (val != "random" && val != "lowest-mode")
            throw ConfigError("key '" + key + "' must be random or lowest-mode",
                              0, key);
    }
    if (!(cfg.late_window > 0.0 && cfg.late_window < 1.0))
        throw ConfigError("key 'validate.late_window' must lie in (0, 1)", 0,
                          "validate.late_window");
    return cfg;
}

inline RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Every effective value, defaults filled in; re-parseable and sufficient to
/// reproduce the run.
inline std::string resolved_config_text(const RunConfig& c) {
    std::ostringstream o;
    o << "[model]\n";
    o << "kind = " << kind_name(c.kind) << "\n";
    o << "preset = custom\n";
    o << "alpha1 = " << g17(c.coeffs.alpha1) << "\n";
    o << "beta1 = " << g17(c.coeffs.beta1) << "\n";
    o << "alpha2 = " << g17(c.coeffs.alpha2) << "\n";
    const double b2 = c.coeffs.beta2 != 0.0 ? c.coeffs.beta2
                                            : default_beta2(c.kind, c.coeffs);
    if (b2 != 0.0) o << "beta2 = " << g17(b2) << "\n";
    o << "\n[constants]\n";
    o << "g = " << g17(c.constants.g) << "\n";
    o << "rho0 = " << g17(c.constants.rho0) << "\n";
    o << "rho_a = " << g17(c.constants.rho_a) << "\n";
    o << "c_d = " << g17(c.c_d) << "\n";
    o << "\n[forcing]\n";
    o << "vx = " << g17(c.vx) << "\n";
    o << "vy = " << g17(c.vy) << "\n";
    o << "q = " << g17(c.q) << "\n";
    o << "\n[boundary]\n";
    o << "u_b = " << g17(c.boundary.ub) << "\n";
    o << "v_b = " << g17(c.boundary.vb) << "\n";
    o << "rho_b = " << g17(c.boundary.rhob) << "\n";
    o << "h = " << g17(c.boundary.h) << "\n";
    o << "\n[equilibrium]\n";
    o << "scan_lo = " << g17(c.scan.lo) << "\n";
    o << "scan_hi = " << g17(c.scan.hi) << "\n";
    o << "samples_per_interval = " << c.scan.samples_per_interval << "\n";
    o << "\n[stability]\n";
    o << "sweep = " << c.sweep << "\n";
    o << "models = " << c.models << "\n";
    o << "r_lo = " << g17(c.r_lo) << "\n";
    o << "r_hi = " << g17(c.r_hi) << "\n";
    o << "r_points = " << c.r_points << "\n";
    o << "c_abs_lo = " << g17(c.c_abs_lo) << "\n";
    o << "c_abs_hi = " << g17(c.c_abs_hi) << "\n";
    o << "c_points = " << c.c_points << "\n";
    o << "c_signs = " << c.c_signs << "\n";
    o << "\n[column]\n";
    o << "n = " << c.n << "\n";
    o << "dt = " << g17(c.dt) << "\n";
    o << "t_end = " << g17(c.t_end) << "\n";
    o << "theta = " << g17(c.theta) << "\n";
    o << "r_max = " << g17(c.r_max) << "\n";
    o << "initial = " << c.initial << "\n";
    o << "amplitude = " << g17(c.amplitude) << "\n";
    o << "shape = " << c.shape << "\n";
    if (!c.profile_file.empty()) o << "profile_file = " << c.profile_file << "\n";
    o << "max_samples = " << c.max_samples << "\n";
    o << "seed = " << c.seed << "\n";
    o << "\n[validate]\n";
    o << "grid = " << c.v_grid << "\n";
    o << "dt = " << g17(c.v_dt) << "\n";
    o << "t_end = " << g17(c.v_t_end) << "\n";
    o << "stationarity_steps = " << c.stationarity_steps << "\n";
    o << "amplitude = " << g17(c.v_amplitude) << "\n";
    o << "shape = " << c.v_shape << "\n";
    o << "growth_threshold = " << g17(c.growth_threshold) << "\n";
    o << "late_window = " << g17(c.late_window) << "\n";
    o << "\n[output]\n";
    o << "dir = " << c.out_dir << "\n";
    return o.str();
}

inline void write_resolved_config(const RunConfig& c,
                                  const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << resolved_config_text(c);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace mixlayer
