#pragma once

// Planning in the HLM for a fixed parameter vector: maximal reachability of
// the goal class, the optimal deterministic meta-policy and its lifting to
// environment states.

#include <vector>

#include "icrl/subsystems.hpp"

namespace icrl {

struct ValueVector {
    std::vector<double> v;  // indexed by abstract state
    long sweeps = 0;        // value-iteration sweeps performed

    double operator[](std::size_t i) const { return v[i]; }
};

/// Deterministic meta-policy over HLM states; -1 where no subsystem applies
/// (goal, fail, or classes with an empty available set).
struct MetaPolicy {
    std::vector<SubsystemId> choice;

    [[nodiscard]] bool has_choice(AbstractIndex s) const {
        return s >= 0 && static_cast<std::size_t>(s) < choice.size() && choice[static_cast<std::size_t>(s)] >= 0;
    }
};

struct ValueIterationOptions {
    double tolerance = 1e-10;
    long max_sweeps = 1'000'000;
};

/// Least fixed point of v(s) = max_c p_c * v(succ(c)), v(goal) = 1, v(fail) = 0,
/// by synchronous value iteration from v = 0. Throws NonConvergence when the
/// sweep cap is hit with the residual above tolerance.
ValueVector max_reachability(const Hlm& hlm, const ParamVector& p, const ValueIterationOptions& options = {});

/// Reachability under a fixed meta-policy (the same recursion without the max).
ValueVector policy_reachability(const Hlm& hlm, const ParamVector& p, const MetaPolicy& meta,
                                const ValueIterationOptions& options = {});

/// Greedy policy for max_reachability. Ties go to the smallest subsystem id,
/// except that a tied choice must make progress towards the goal, so that a
/// zero-cost cycle of optimal actions can never be selected.
MetaPolicy extract_meta_policy(const Hlm& hlm, const ParamVector& p);
MetaPolicy extract_meta_policy(const Hlm& hlm, const ParamVector& p, const ValueVector& values);

/// HLM-predicted task success: max_reachability at the initial class.
double predict_task_success(const Hlm& hlm, const ParamVector& sigma_hat);

/// Subsystem chosen for environment state s. Throws NoSubsystemAvailable when
/// the class of s has no choice.
SubsystemId lift(const MetaPolicy& meta, const Hlm& hlm, const EnvState& s);

}  // namespace icrl
