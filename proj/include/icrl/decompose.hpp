#pragma once

// Task-specification decomposition: the smallest subtask success
// requirements p_c (above the lower bounds L, below the upper bounds U) for
// which some HLM policy reaches the goal with probability at least 1 - delta.
//
// The optimum always sits on a single simple init->goal path with every
// off-path parameter at its lower bound, so the solver enumerates simple paths
// and water-fills each one. oracle_grid_solve is an independent brute-force
// check over a parameter grid that only uses max_reachability.

#include <optional>
#include <vector>

#include "icrl/hlm_plan.hpp"

namespace icrl {

struct DecompositionProblem {
    const Hlm* hlm = nullptr;
    double delta = 0.05;
    /// L: per-id lower bound; empty means all zero.
    std::vector<std::optional<double>> lower;
    /// U: per-id upper bound; empty or nullopt means 1.
    std::vector<std::optional<double>> upper;

    [[nodiscard]] double lower_bound(SubsystemId c) const;
    [[nodiscard]] double upper_bound(SubsystemId c) const;
    void validate() const;
};

struct HlmPath {
    std::vector<AbstractIndex> states;       // init ... goal
    std::vector<SubsystemId> subsystems;     // one per hop
};

struct DecompositionResult {
    ParamVector p;
    std::vector<SubsystemId> support_path;
    double objective = 0.0;      // sum_c (p_c - lower(c))
    bool feasible = false;
    double certified_value = 0.0;  // max_reachability(p) at init
};

inline constexpr std::size_t kMaxPaths = 100'000;

/// All simple init->goal paths, in lexicographic order of their subsystem-id
/// sequences. Throws PathExplosion beyond kMaxPaths.
std::vector<HlmPath> enumerate_paths(const Hlm& hlm);

/// Per-path parameters, aligned with path.subsystems.
struct PathAssignment {
    std::vector<double> p;
    double theta = 0.0;  // common unclamped level
};

/// min sum p_c subject to prod p_c >= threshold and box bounds along one path,
/// by bisection on the common level theta. nullopt when even the upper bounds
/// cannot reach the threshold.
std::optional<PathAssignment> waterfill_path(const HlmPath& path, double threshold, const DecompositionProblem& bounds);

DecompositionResult solve_decomposition(const DecompositionProblem& problem);

/// Exhaustive grid search (bound-pruned) for at most four subsystems.
/// Throws TooManyParameters beyond that.
DecompositionResult oracle_grid_solve(const DecompositionProblem& problem, double resolution);

}  // namespace icrl
