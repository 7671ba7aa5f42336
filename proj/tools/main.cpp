#include <cmath>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gencur/errors.hpp"
#include "gencur/scenario.hpp"

namespace {

// A positional that names a bundled scenario resolves to its embedded config;
// anything else is treated as a path to a JSON file.
gencur::ScenarioConfig resolve_config(const std::string& arg) {
    for (const std::string& name : gencur::bundled_scenario_names()) {
        if (name == arg) return gencur::parse_scenario(gencur::bundled_scenario_json(name));
    }
    return gencur::load_scenario_file(arg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scenario runner for generalized continuity equations of dual "
                 "Schrodinger fields"};
    app.require_subcommand(1);

    std::string config_arg;
    std::string out_dir;
    double dt_override = 0.0;
    int steps_override = 0;
    int refine_levels = 0;
    unsigned long seed_override = 0;

    CLI::App* run = app.add_subcommand("run", "run a scenario and write reports");
    run->add_option("config", config_arg,
                    "config JSON path or bundled scenario name")
        ->required();
    run->add_option("--out", out_dir, "output directory (default out/<name>)");
    CLI::Option* dt_opt =
        run->add_option("--dt", dt_override, "override the time step");
    CLI::Option* steps_opt = run->add_option(
        "--steps", steps_override, "override M (snapshots span -M..M)");
    run->add_option("--refine", refine_levels,
                    "extra refinement levels, halving dx and dt each level");
    CLI::Option* seed_opt = run->add_option(
        "--seed", seed_override, "override the seed of random initial data");

    CLI::App* validate =
        app.add_subcommand("validate", "parse and validate a config, run nothing");
    validate->add_option("config", config_arg,
                         "config JSON path or bundled scenario name")
        ->required();

    CLI::App* list = app.add_subcommand("list-scenarios", "list bundled scenarios");

    CLI::App* describe =
        app.add_subcommand("describe", "print a bundled scenario config");
    describe->add_option("scenario", config_arg, "bundled scenario name")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const std::string& name : gencur::bundled_scenario_names()) {
                gencur::ScenarioConfig cfg =
                    gencur::parse_scenario(gencur::bundled_scenario_json(name));
                std::cout << name << ": " << cfg.description << '\n';
            }
            return 0;
        }
        if (describe->parsed()) {
            std::cout << gencur::bundled_scenario_json(config_arg);
            return 0;
        }

        gencur::ScenarioConfig cfg = resolve_config(config_arg);
        if (validate->parsed()) {
            std::cout << "OK: " << cfg.name << '\n';
            return 0;
        }

        if (dt_opt->count() > 0) {
            if (!std::isfinite(dt_override) || dt_override == 0.0)
                throw gencur::ConfigError("--dt: must be finite and non-zero");
            cfg.dt = dt_override;
        }
        if (steps_opt->count() > 0) {
            if (steps_override < 0)
                throw gencur::ConfigError("--steps: must be >= 0");
            cfg.steps = steps_override;
        }
        if (seed_opt->count() > 0) {
            cfg.initial_plus.seed = seed_override;
            cfg.initial_minus.seed = seed_override;
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (refine_levels < 0)
            throw gencur::ConfigError("--refine: must be >= 0");

        if (refine_levels == 0) {
            gencur::run_scenario(cfg, std::cout);
        } else {
            gencur::run_refinement_study(cfg, refine_levels, std::cout);
        }
        return 0;
    } catch (const gencur::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const gencur::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 1;
    } catch (const gencur::FieldOverflow& e) {
        std::cerr << "overflow: " << e.what() << '\n';
        return 3;
    } catch (const gencur::Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    }
}
