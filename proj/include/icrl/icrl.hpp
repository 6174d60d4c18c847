#pragma once

// The iterative compositional loop: decompose the task requirement, train the
// subsystem with the largest gap to its requirement, re-estimate it, refine
// the bounds and re-plan, until the HLM predicts success above 1 - delta or
// the decomposition becomes infeasible.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "icrl/decompose.hpp"
#include "icrl/estimator.hpp"
#include "icrl/trainer.hpp"

namespace icrl {

struct IcrlConfig {
    double delta = 0.05;
    TrainerParams training;
    EstimationOptions estimation;
    std::uint64_t eval_rollouts = 300;
    /// Empirical whole-task evaluation every this many iterations; 0 disables it.
    int eval_every = 1;
    std::uint64_t seed = 0;
};

struct Subsystem {
    SubsystemSpec spec;
    std::unique_ptr<SubsystemTrainer> trainer;
    std::uint64_t steps = 0;  // N_c
    double sigma_hat = 0.0;
};

struct RunLogRow {
    int iteration = 0;
    std::uint64_t total_steps = 0;
    SubsystemId trained = -1;
    std::vector<double> sigma_hat;  // after this iteration's estimate
    std::vector<double> p;          // decomposition solved at the start of the iteration
    double predicted = 0.0;
    std::optional<double> empirical;
    bool feasible = true;

    // Inputs of the decomposition, kept for inspection; not written to CSV.
    std::vector<std::optional<double>> lower;
    std::vector<std::optional<double>> upper;
    std::vector<SubsystemId> support_path;
};

struct RunLog {
    std::size_t num_subsystems = 0;
    std::vector<RunLogRow> rows;

    [[nodiscard]] std::string csv_header() const;
    [[nodiscard]] std::string csv_row(const RunLogRow& row) const;
    void write_csv(std::ostream& out) const;
};

enum class Termination { Satisfied, Infeasible };

struct IcrlResult {
    Termination termination = Termination::Satisfied;
    Hlm hlm;
    std::vector<Subsystem> subsystems;
    MetaPolicy meta;
    double predicted = 0.0;
    std::optional<double> final_empirical;
    RunLog log;
    int iterations = 0;
    [[nodiscard]] std::uint64_t total_steps() const;
};

/// Subsystem with the largest p_c - sigma_hat_c among non-exhausted ids,
/// ties to the lowest id. When no gap is positive, the lowest-id
/// non-exhausted subsystem on the support path (or overall) is returned.
SubsystemId select_subsystem(const ParamVector& p, const ParamVector& sigma_hat, const std::vector<bool>& exhausted,
                             const std::vector<SubsystemId>& support_path = {});

/// Fraction of n whole-task episodes from `init` that reach the target:
/// repeatedly lift the meta-policy and run the chosen subsystem until it
/// exits (continue), times out or hits lava (fail). Landing in the failure
/// class counts as a failed episode.
double evaluate_meta_policy(const Gridworld& world, const Hlm& hlm, const std::vector<SubsystemSpec>& specs,
                            const std::vector<Policy>& policies, const MetaPolicy& meta, const EnvState& init,
                            std::uint64_t n, std::uint64_t seed);

using RowCallback = std::function<void(const RunLog&, const RunLogRow&)>;

IcrlResult icrl_run(const Gridworld& world, std::vector<SubsystemSpec> specs, const EnvState& init,
                    const StateSet& target, const IcrlConfig& config,
                    const TrainerFactory& factory = q_learning_factory(), const RowCallback& on_row = {});

}  // namespace icrl
