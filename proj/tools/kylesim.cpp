#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "kyle/config.hpp"
#include "kyle/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo experiments for an insider-trading equilibrium "
                 "with long-memory order flow"};
    app.require_subcommand(1);

    std::string run_path, dump_path, out_dir;
    std::uint64_t seed = 0, paths = 0, steps = 0;

    CLI::App* run = app.add_subcommand("run", "Run one experiment from a config file");
    run->add_option("config", run_path, "Path to the experiment config")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "Override run.seed");
    CLI::Option* paths_opt = run->add_option("--paths", paths, "Override run.paths");
    CLI::Option* steps_opt = run->add_option("--steps", steps, "Override run.steps");
    CLI::Option* out_opt = run->add_option("--out", out_dir, "Override run.out_dir");

    CLI::App* list = app.add_subcommand("list", "List available experiments");
    CLI::App* dump =
        app.add_subcommand("dump-config", "Parse a config and print its canonical form");
    dump->add_option("config", dump_path, "Path to the experiment config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (list->parsed()) {
            for (const auto& info : kyle::list_experiments())
                std::printf("%-22s %s\n", info.name.c_str(), info.description.c_str());
            return 0;
        }
        if (dump->parsed()) {
            kyle::ExperimentConfig cfg = kyle::load_config(dump_path);
            kyle::validate_config(cfg);
            std::fputs(kyle::dump_config(cfg).c_str(), stdout);
            return 0;
        }
        kyle::ExperimentConfig cfg = kyle::load_config(run_path);
        if (*seed_opt) cfg.seed = seed;
        if (*paths_opt) cfg.paths = paths;
        if (*steps_opt) cfg.steps = steps;
        if (*out_opt) cfg.out_dir = out_dir;
        kyle::validate_config(cfg);
        const int code = kyle::run_experiment(cfg);
        if (code == 0)
            std::printf("%s: all checks passed (results in %s)\n",
                        cfg.experiment.c_str(), cfg.out_dir.c_str());
        else
            std::printf("%s: statistical checks FAILED, see %s/summary.txt\n",
                        cfg.experiment.c_str(), cfg.out_dir.c_str());
        return code;
    } catch (const kyle::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
