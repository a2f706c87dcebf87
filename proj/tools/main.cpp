#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mixlayer/commands.hpp"
#include "mixlayer/config.hpp"

using namespace mixlayer;

int main(int argc, char** argv) {
    CLI::App app{
        "Richardson-number mixing-layer closures: equilibria, linear "
        "stability and nonlinear column runs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string model_override;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    app.add_option("--config", config_path, "configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--model", model_override,
                   "closure model (R-2-1-3 | R-2-3 | R-2-2-4 | R-2-2), "
                   "overrides model.kind");
    app.add_option("--out", out_override, "output directory, overrides "
                                          "output.dir");
    auto* seed_opt = app.add_option("--seed", seed_override,
                                    "seed for the random perturbation shape");

    auto* eq = app.add_subcommand("equilibria",
                                  "solve the fixed-point problem and write "
                                  "roots + profiles");
    auto* map = app.add_subcommand("stability-map",
                                   "classify a sweep and write the map table");
    auto* sim = app.add_subcommand("simulate", "run the nonlinear column");
    auto* val = app.add_subcommand("validate",
                                   "compare linear classification with the "
                                   "nonlinear decay verdict");

    CLI11_PARSE(app, argc, argv);
    seed_given = seed_opt->count() > 0;

    RunConfig cfg;
    try {
        if (config_path.empty())
            throw ConfigError("no --config given (forcing has no default)");
        cfg = parse_config_file(config_path);
        if (!model_override.empty()) {
            const auto k = kind_by_name(model_override);
            if (!k)
                throw ConfigError("--model: unknown model '" + model_override +
                                  "'");
            cfg.kind = *k;
        }
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (seed_given) cfg.seed = seed_override;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (eq->parsed()) return cmd_equilibria(cfg);
        if (map->parsed()) return cmd_stability_map(cfg);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (val->parsed()) return cmd_validate(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
