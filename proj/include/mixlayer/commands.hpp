#pragma once

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mixlayer/column.hpp"
#include "mixlayer/config.hpp"
#include "mixlayer/csv.hpp"
#include "mixlayer/equilibrium.hpp"
#include "mixlayer/stability.hpp"

namespace mixlayer {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNoRoot = 2;
inline constexpr int kExitZoneExit = 3;

inline const std::string kRootsHeader =
    "model,C,root_index,R_star,nu1e,nu2e,valid";
inline const std::string kMapHeader =
    "model,R_e,Q,C,lambda1_re,lambda1_im,lambda2_re,lambda2_im,lambda3_re,"
    "lambda3_im,det,trace,trace_adj,paper_criteria_pass,routh_hurwitz_pass,"
    "classification";
inline const std::string kSeriesHeader =
    "t,norm_u,norm_v,norm_rho,R_surface,R_min,R_max,valid";
inline const std::string kProfileHeader = "z,u,v,rho";
inline const std::string kValidateHeader =
    "model,R_e,classification,verdict,stationarity_residual,late_ratio,"
    "growth_factor,decay_rate,agree";

/// Default 20-point validate grid per model: a stable span of [0, 10], four
/// stable negative points, and four points inside the model's unstable band.
inline std::vector<double> default_validate_grid(ClosureKind kind) {
    static const std::vector<double> pos = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0,
                                            4.0, 5.0, 6.0, 7.0, 8.5, 10.0};
    std::vector<double> neg;
    switch (kind) {
        case ClosureKind::R213:
            neg = {-5.0, -4.5, -4.0, -3.5, -0.19, -0.17, -0.14, -0.11};
            break;
        case ClosureKind::R23:
            neg = {-5.0, -4.0, -3.0, -2.5, -0.095, -0.085, -0.07, -0.055};
            break;
        case ClosureKind::R224:
            neg = {-5.0, -3.0, -1.0, -0.5, -0.36, -0.32, -0.28, -0.24};
            break;
        case ClosureKind::R22:
            neg = {-5.0, -3.0, -1.0, -0.5, -0.19, -0.15, -0.11, -0.08};
            break;
    }
    std::vector<double> grid = neg;
    grid.insert(grid.end(), pos.begin(), pos.end());
    std::sort(grid.begin(), grid.end());
    return grid;
}

namespace detail {

inline std::filesystem::path out_path(const RunConfig& cfg,
                                      const std::string& name) {
    return std::filesystem::path(cfg.out_dir) / name;
}

inline std::vector<ClosureKind> selected_kinds(const RunConfig& cfg) {
    if (cfg.models == "all")
        return {kAllKinds.begin(), kAllKinds.end()};
    return {cfg.kind};
}

inline std::string nan_str() { return "nan"; }

inline void write_profile(const std::filesystem::path& path,
                          const Grid& grid, const ColumnState& s) {
    CsvWriter w(path, kProfileHeader);
    for (int i = 0; i < grid.nodes(); ++i) {
        w.row({g17(grid.z(i)), g17(s.u[i]), g17(s.v[i]), g17(s.rho[i])});
    }
    w.close();
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) out.push_back(i + 1 == n ? hi : lo + i * h);
    return out;
}

/// log-spaced |C| grid per sign, ascending within each sign block.
inline std::vector<double> c_grid_from(const RunConfig& cfg) {
    std::vector<double> mags;
    const int n = std::max(1, cfg.c_points);
    const double llo = std::log10(cfg.c_abs_lo), lhi = std::log10(cfg.c_abs_hi);
    for (int i = 0; i < n; ++i) {
        const double t = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
        mags.push_back(std::pow(10.0, llo + t * (lhi - llo)));
    }
    std::vector<double> out;
    if (cfg.c_signs == "negative" || cfg.c_signs == "both")
        for (double m : mags) out.push_back(-m);
    if (cfg.c_signs == "positive" || cfg.c_signs == "both")
        for (double m : mags) out.push_back(m);
    return out;
}

inline void emit_map_rows(CsvWriter& w, const std::vector<MapRow>& rows) {
    for (const MapRow& r : rows) {
        if (!r.ok) {
            w.row({kind_name(r.kind), g17(r.re), nan_str(), nan_str(),
                   nan_str(), nan_str(), nan_str(), nan_str(), nan_str(),
                   nan_str(), nan_str(), nan_str(), nan_str(), "0", "0",
                   "Error"});
            continue;
        }
        const auto& rep = r.report;
        w.row({kind_name(r.kind), g17(r.re), g17(r.q), g17(r.c),
               g17(rep.eigs[0].real()), g17(rep.eigs[0].imag()),
               g17(rep.eigs[1].real()), g17(rep.eigs[1].imag()),
               g17(rep.eigs[2].real()), g17(rep.eigs[2].imag()), g17(rep.det),
               g17(rep.trace), g17(rep.trace_adj),
               rep.triple_pass ? "1" : "0", rep.routh_hurwitz_pass ? "1" : "0",
               classification_name(rep.classification)});
    }
}

inline const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Render stability zones from map.csv (written next to this script)."""
import csv
import os
import sys

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required to render the map")

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "map.csv"))))
models = sorted({r["model"] for r in rows})
colors = {"Stable": "#2a9d3f", "Unstable": "#d62728",
          "PhysicallyInvalid": "#7f7f7f", "Marginal": "#ff7f0e",
          "Error": "#000000"}
fig, axes = plt.subplots(len(models), 1, sharex=True,
                         figsize=(8, 1.6 * len(models)))
if len(models) == 1:
    axes = [axes]
for ax, model in zip(axes, models):
    for r in rows:
        if r["model"] != model:
            continue
        ax.axvline(float(r["R_e"]), color=colors.get(r["classification"],
                                                     "#000000"), lw=1.2)
    ax.set_ylabel(model, rotation=0, ha="right", va="center")
    ax.set_yticks([])
axes[-1].set_xlabel("equilibrium Richardson number R")
handles = [plt.Line2D([0], [0], color=c, lw=3) for c in colors.values()]
fig.legend(handles, list(colors.keys()), loc="upper center", ncol=5,
           fontsize=8)
fig.tight_layout(rect=(0, 0, 1, 0.93))
out = os.path.join(here, "map.png")
fig.savefig(out, dpi=150)
print("wrote", out)
)PY";

}  // namespace detail

/// equilibria: solve the fixed-point problem for the configured forcing,
/// write the root table and a profile per physically valid root.
inline int cmd_equilibria(const RunConfig& cfg) {
    const ClosureModel model = model_from(cfg);
    const Forcing forcing = forcing_from(cfg);
    double c;
    try {
        c = fixed_point_constant(forcing);
    } catch (const std::exception& e) {
        std::cerr << "equilibria: " << e.what() << "\n";
        return kExitConfig;
    }
    const RootScan scan = solve_fixed_points({model, c}, cfg.scan);

    write_resolved_config(cfg, detail::out_path(cfg, "resolved_config.ini"));
    CsvWriter w(detail::out_path(cfg, "roots.csv"), kRootsHeader);
    int idx = 0;
    int valid_count = 0;
    for (const Root& r : scan.roots) {
        w.row({model.name(), g17(c), std::to_string(idx), g17(r.r), g17(r.nu1),
               g17(r.nu2), r.valid ? "1" : "0"});
        if (r.valid) ++valid_count;
        ++idx;
    }
    w.close();
    if (!scan.grazing.empty()) {
        CsvWriter gw(detail::out_path(cfg, "grazing.csv"), kRootsHeader);
        int gidx = 0;
        for (const Root& r : scan.grazing) {
            gw.row({model.name(), g17(c), std::to_string(gidx++), g17(r.r),
                    g17(r.nu1), g17(r.nu2), r.valid ? "1" : "0"});
        }
        gw.close();
    }

    const Grid grid{cfg.boundary.h, cfg.n};
    idx = 0;
    for (const Root& r : scan.roots) {
        if (r.valid) {
            const Equilibrium eq =
                build_equilibrium(model, forcing, r.r, cfg.boundary);
            detail::write_profile(
                detail::out_path(cfg, "profile_root" + std::to_string(idx) +
                                          ".csv"),
                grid, equilibrium_state(eq, grid));
        }
        ++idx;
    }
    if (valid_count == 0) {
        std::cerr << "equilibria: no physically valid root in ["
                  << cfg.scan.lo << ", " << cfg.scan.hi << "]\n";
        return kExitNoRoot;
    }
    std::cout << "equilibria: " << scan.roots.size() << " root(s), "
              << valid_count << " valid; C = " << g17(c) << "\n";
    return kExitOk;
}

/// stability-map: classify a sweep (R or C) for the selected models, write
/// the map table and a plot script.
inline int cmd_stability_map(const RunConfig& cfg) {
    write_resolved_config(cfg, detail::out_path(cfg, "resolved_config.ini"));
    CsvWriter w(detail::out_path(cfg, "map.csv"), kMapHeader);

    std::size_t total = 0, failed = 0;
    for (ClosureKind kind : detail::selected_kinds(cfg)) {
        const ClosureModel model(kind, cfg.coeffs);
        std::vector<MapRow> rows;
        if (cfg.sweep == "R") {
            rows = stability_map_over_r(
                model, detail::linspace(cfg.r_lo, cfg.r_hi, cfg.r_points),
                cfg.vx, cfg.vy, cfg.constants, cfg.boundary);
        } else {
            rows = stability_map_over_c(model, detail::c_grid_from(cfg), cfg.vx,
                                        cfg.vy, cfg.constants, cfg.boundary,
                                        cfg.scan);
        }
        for (const MapRow& r : rows) {
            ++total;
            if (!r.ok) {
                ++failed;
                std::cerr << "stability-map: " << kind_name(r.kind) << " point "
                          << r.re << ": " << r.error << "\n";
            }
        }
        detail::emit_map_rows(w, rows);
    }
    w.close();

    {
        const auto script = detail::out_path(cfg, "plot_map.py");
        const std::filesystem::path tmp = script.string() + ".tmp";
        std::ofstream out(tmp, std::ios::trunc);
        out << detail::kPlotScript;
        out.close();
        std::filesystem::rename(tmp, script);
    }

    std::cout << "stability-map: " << total - failed << "/" << total
              << " points classified\n";
    return (total > 0 && failed == total) ? kExitNoRoot : kExitOk;
}

/// simulate: march the column from the configured initial state, write the
/// norm time series and the final profile.
inline int cmd_simulate(const RunConfig& cfg) {
    const ClosureModel model = model_from(cfg);
    const Forcing forcing = forcing_from(cfg);
    SimConfig sim = sim_config_from(cfg);
    const Grid& grid = sim.grid;

    ColumnState initial;
    ColumnState reference;
    if (cfg.initial == "file") {
        const CsvTable t = read_csv(cfg.profile_file);
        if (static_cast<int>(t.rows.size()) != grid.nodes()) {
            std::cerr << "simulate: profile '" << cfg.profile_file << "' has "
                      << t.rows.size() << " rows, expected " << grid.nodes()
                      << "\n";
            return kExitConfig;
        }
        initial.u.resize(grid.nodes());
        initial.v.resize(grid.nodes());
        initial.rho.resize(grid.nodes());
        for (int i = 0; i < grid.nodes(); ++i) {
            const auto& row = t.rows[i];
            if (row.size() != 4) {
                std::cerr << "simulate: malformed profile row " << i << "\n";
                return kExitConfig;
            }
            const double z = std::stod(row[0]);
            if (std::abs(z - grid.z(i)) > 1e-9 * grid.h) {
                std::cerr << "simulate: profile z grid mismatch at row " << i
                          << "\n";
                return kExitConfig;
            }
            initial.u[i] = std::stod(row[1]);
            initial.v[i] = std::stod(row[2]);
            initial.rho[i] = std::stod(row[3]);
        }
        reference = initial;
    } else {
        double c;
        try {
            c = fixed_point_constant(forcing);
        } catch (const std::exception& e) {
            std::cerr << "simulate: " << e.what() << "\n";
            return kExitConfig;
        }
        const RootScan scan = solve_fixed_points({model, c}, cfg.scan);
        const Root* first_valid = nullptr;
        for (const Root& r : scan.roots) {
            if (r.valid) {
                first_valid = &r;
                break;
            }
        }
        if (!first_valid) {
            std::cerr << "simulate: no physically valid equilibrium root\n";
            return kExitNoRoot;
        }
        const Equilibrium eq =
            build_equilibrium(model, forcing, first_valid->r, cfg.boundary);
        reference = equilibrium_state(eq, grid);
        initial = reference;
        if (cfg.initial == "perturbed") {
            ExperimentConfig ec;
            ec.amplitude = cfg.amplitude;
            ec.shape = cfg.shape == "lowest-mode" ? PerturbationShape::LowestMode
                                                  : PerturbationShape::Random;
            ec.seed = cfg.seed;
            const auto dp = perturbation_field(eq, grid, ec);
            for (int i = 0; i < grid.nodes(); ++i) {
                initial.u[i] += dp[i].u_prime;
                initial.v[i] += dp[i].v_prime;
                initial.rho[i] += dp[i].rho_prime;
            }
        }
    }

    write_resolved_config(cfg, detail::out_path(cfg, "resolved_config.ini"));
    const RunResult res =
        run_column(initial, sim, reference, cfg.max_samples, 0.0);

    CsvWriter w(detail::out_path(cfg, "series.csv"), kSeriesHeader);
    for (const SampleRow& r : res.samples) {
        w.row({g17(r.t), g17(r.norm_u), g17(r.norm_v), g17(r.norm_rho),
               g17(r.r_surface), g17(r.r_min), g17(r.r_max),
               r.valid ? "1" : "0"});
    }
    w.close();
    detail::write_profile(detail::out_path(cfg, "final_profile.csv"), grid,
                          res.final_state);

    if (res.zone_exit) {
        std::cerr << "simulate: run entered the f2 < 0 zone at t = "
                  << res.zone_exit_t << ", face R = " << res.zone_exit_r
                  << "\n";
        return kExitZoneExit;
    }
    std::cout << "simulate: " << res.samples.size() << " samples to t = "
              << g17(res.samples.back().t) << "\n";
    return kExitOk;
}

/// validate: compare the linear classification against the nonlinear decay
/// verdict on a per-model grid; write the agreement table and print the
/// agreement fraction.
inline int cmd_validate(const RunConfig& cfg) {
    std::vector<double> custom_grid;
    if (cfg.v_grid != "default") {
        std::istringstream in(cfg.v_grid);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            const std::string t = detail::trim(tok);
            if (t.empty()) continue;
            custom_grid.push_back(detail::parse_double(t, "validate.grid", 0));
        }
        if (custom_grid.empty()) {
            std::cerr << "validate: empty grid\n";
            return kExitConfig;
        }
    }

    write_resolved_config(cfg, detail::out_path(cfg, "resolved_config.ini"));
    CsvWriter w(detail::out_path(cfg, "validate.csv"), kValidateHeader);

    SimConfig sim = sim_config_from(cfg);
    sim.dt = cfg.v_dt;
    sim.t_end = cfg.v_t_end;

    std::size_t agree = 0, judged = 0;
    for (ClosureKind kind : detail::selected_kinds(cfg)) {
        const ClosureModel model(kind, cfg.coeffs);
        sim.model = model;
        const std::vector<double> grid_r =
            custom_grid.empty() ? default_validate_grid(kind) : custom_grid;
        for (double re : grid_r) {
            std::string cls_name, verdict = "n/a", agree_s = "na";
            std::string stat_s = detail::nan_str(), ratio_s = detail::nan_str(),
                        growth_s = detail::nan_str(), rate_s = detail::nan_str();
            try {
                const Equilibrium eq = equilibrium_for_richardson(
                    model, re, cfg.vx, cfg.vy, cfg.constants, cfg.boundary);
                StabilityReport rep;
                if (eq.nu2e <= 0.0) {
                    rep.classification = Classification::PhysicallyInvalid;
                } else {
                    rep = classify(assemble_matrix(eq, model, cfg.constants),
                                   eq.nu2e);
                }
                cls_name = classification_name(rep.classification);
                if (rep.classification == Classification::PhysicallyInvalid) {
                    verdict = "invalid-equilibrium";
                } else {
                    // forcing consistent with this equilibrium
                    sim.forcing = Forcing{cfg.vx, cfg.vy, eq.q(), cfg.constants};

                    if (rep.classification == Classification::Stable) {
                        SimConfig stat_sim = sim;
                        stat_sim.t_end = cfg.stationarity_steps * sim.dt;
                        const ColumnState s0 = equilibrium_state(eq, sim.grid);
                        const RunResult rr =
                            run_column(s0, stat_sim, s0, 1, 0.0);
                        double res = 0.0, scale = 0.0;
                        const auto& fs = rr.final_state;
                        for (std::size_t i = 0; i < s0.u.size(); ++i) {
                            res = std::max({res, std::abs(fs.u[i] - s0.u[i]),
                                            std::abs(fs.v[i] - s0.v[i]),
                                            std::abs(fs.rho[i] - s0.rho[i])});
                            scale = std::max(
                                {scale, std::abs(s0.u[i]), std::abs(s0.v[i]),
                                 std::abs(s0.rho[i])});
                        }
                        stat_s = g17(res / std::max(scale, 1e-300));
                    }

                    ExperimentConfig ec;
                    ec.amplitude = cfg.v_amplitude;
                    ec.shape = cfg.v_shape == "lowest-mode"
                                   ? PerturbationShape::LowestMode
                                   : PerturbationShape::Random;
                    ec.seed = cfg.seed;
                    ec.growth_threshold = cfg.growth_threshold;
                    ec.late_window = cfg.late_window;
                    const ExperimentResult ex =
                        run_perturbation_experiment(eq, sim, ec);
                    verdict = verdict_name(ex.verdict);
                    ratio_s = g17(ex.late_ratio);
                    growth_s = g17(ex.growth_factor);
                    rate_s = g17(ex.decay_rate);

                    if (rep.classification == Classification::Stable) {
                        const bool ok = ex.verdict == DecayVerdict::Decay;
                        agree_s = ok ? "1" : "0";
                        ++judged;
                        agree += ok;
                    } else if (rep.classification == Classification::Unstable) {
                        const bool ok = ex.verdict == DecayVerdict::Growth ||
                                        ex.verdict == DecayVerdict::ZoneExit;
                        agree_s = ok ? "1" : "0";
                        ++judged;
                        agree += ok;
                    }
                }
            } catch (const std::exception& e) {
                cls_name = "Error";
                verdict = std::string("error: ") + e.what();
            }
            w.row({kind_name(kind), g17(re), cls_name, verdict, stat_s, ratio_s,
                   growth_s, rate_s, agree_s});
        }
    }
    w.close();
    std::cout << "validate: agreement " << agree << "/" << judged;
    if (judged > 0)
        std::cout << " (" << g17(static_cast<double>(agree) / judged) << ")";
    std::cout << "\n";
    return kExitOk;
}

}  // namespace mixlayer
