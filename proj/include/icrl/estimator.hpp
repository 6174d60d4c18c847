#pragma once

// Subtask success estimation: Monte Carlo rollouts with Hoeffding bounds, and
// an exact finite-horizon dynamic program used as an oracle.

#include <cstdint>
#include <map>
#include <vector>

#include "icrl/policy.hpp"

namespace icrl {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct SuccessEstimate {
    double sigma_hat = 0.0;
    std::uint64_t n = 0;  // rollouts per estimate (per entry in strict mode)
    double lo = 0.0;
    double hi = 1.0;
};

struct EstimationOptions {
    std::uint64_t n_rollouts = 300;
    double beta = 0.05;
    /// Roll every entry state n_rollouts times and report the worst entry
    /// instead of the aggregate rate over uniformly sampled entries.
    bool strict_min_mode = false;
};

/// Two-sided Hoeffding interval with half-width sqrt(ln(2/beta) / (2n)),
/// clamped to [0, 1].
Interval hoeffding_interval(double sigma_hat, std::uint64_t n, double beta);

/// Rollout i draws from its own stream derive_seed(seed, Rollout, 0, i), so
/// the estimate does not depend on evaluation order.
SuccessEstimate estimate_success(const Gridworld& world, const SubsystemSpec& spec, const Policy& policy,
                                 const EstimationOptions& options, std::uint64_t seed);

/// u_t over every state index: probability of reaching the exit set within t
/// steps. The dead index always holds 0.
std::vector<double> reach_within(const Gridworld& world, const IndexedSubsystem& sub, const Policy& policy, int t);

struct ExactSuccess {
    std::map<EnvState, double> per_entry;
    double min = 0.0;   // sigma-bar: worst entry
    double mean = 0.0;  // uniform average over entries
};

/// Exact sigma_c(s) at the subsystem horizon for every entry state.
ExactSuccess exact_subtask_success(const Gridworld& world, const SubsystemSpec& spec, const Policy& policy);

}  // namespace icrl
