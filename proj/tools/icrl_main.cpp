// icrl: command-line front end.
//
//   icrl run <config.json> [--seed N] [--out DIR]
//   icrl decompose <config.json>
//   icrl check <config.json>

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "icrl/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Compositional RL with automatic task decomposition"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;

    auto* run = app.add_subcommand("run", "train subsystems until the task requirement is met");
    run->add_option("config", config_path, "experiment configuration (JSON)")->required();
    run->add_option("--seed", seed, "override the master seed");
    run->add_option("--out", out_dir, "override the output directory");

    auto* decompose = app.add_subcommand("decompose", "print the initial subtask requirements");
    decompose->add_option("config", config_path, "experiment configuration (JSON)")->required();

    auto* check = app.add_subcommand("check", "report subsystem composability");
    check->add_option("config", config_path, "experiment configuration (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            return icrl::print_composability(icrl::load_config(config_path, false), std::cout);
        }
        icrl::Config config = icrl::load_config(config_path);
        if (decompose->parsed()) return icrl::print_decomposition(config, std::cout);
        if (seed) config.seed = *seed;
        if (out_dir) config.out_dir = *out_dir;
        return icrl::run_experiment(config, std::cout);
    } catch (const icrl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const icrl::NotComposable& e) {
        std::cerr << "not composable:\n" << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return icrl::kExitError;
}
