#pragma once

// Experiment configuration (JSON) and the orchestration behind the `icrl`
// command-line tool.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "icrl/icrl.hpp"

namespace icrl {

class ConfigError : public Error {
public:
    enum class Kind { Parse, Validation };
    ConfigError(Kind kind, std::string field, const std::string& what);
    [[nodiscard]] Kind kind() const { return kind_; }
    /// JSON path of the offending field, e.g. "subsystems[3].entry".
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    Kind kind_;
    std::string field_;
};

struct Config {
    std::string map_text;
    double slip = 0.1;
    double delta = 0.05;
    Orientation init_orientation = Orientation::E;
    std::vector<SubsystemSpec> subsystems;
    std::vector<CellPos> target_cells;
    TrainerParams training;
    EstimationOptions estimation;
    std::uint64_t eval_rollouts = 300;
    int eval_every = 1;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "icrl_out";

    [[nodiscard]] LabyrinthMap map() const { return parse_map(map_text); }
    [[nodiscard]] EnvState init_state() const;
    [[nodiscard]] StateSet target() const { return expand_cells(target_cells); }
    [[nodiscard]] IcrlConfig icrl_config() const;
};

/// Parses and validates a configuration document. Relative map paths resolve
/// against base_dir. With require_composable, a non-composable collection
/// raises NotComposable naming the offending pairs.
Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir, bool require_composable = true);
Config load_config(const std::filesystem::path& path, bool require_composable = true);

inline constexpr int kExitSatisfied = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

/// Runs the full loop and writes run_log.csv, summary.json and
/// final_policies/ under config.out_dir. Returns the process exit status.
int run_experiment(const Config& config, std::ostream& progress);

/// Solves the initial decomposition (no training) and prints it.
int print_decomposition(const Config& config, std::ostream& out);

/// Prints the composability report.
int print_composability(const Config& config, std::ostream& out);

}  // namespace icrl
