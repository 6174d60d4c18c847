#pragma once

#include <array>
#include <vector>

#include "icrl/gridworld.hpp"
#include "icrl/subsystems.hpp"

namespace icrl {

using ActionDistribution = std::array<double, kNumActions>;

/// Stationary policy over Gridworld state indices. Deterministic policies
/// never draw from the random stream.
class Policy {
public:
    Policy() = default;
    static Policy deterministic(std::vector<Action> actions);
    static Policy stochastic(std::vector<ActionDistribution> distributions);
    static Policy uniform(std::size_t num_states);

    [[nodiscard]] std::size_t size() const { return dist_.size(); }
    [[nodiscard]] bool is_deterministic() const { return deterministic_; }
    [[nodiscard]] const ActionDistribution& distribution(StateIndex s) const { return dist_[s]; }
    /// Only meaningful for deterministic policies.
    [[nodiscard]] Action action(StateIndex s) const { return actions_[s]; }
    Action act(StateIndex s, Rng& rng) const;

private:
    std::vector<ActionDistribution> dist_;
    std::vector<Action> actions_;
    bool deterministic_ = false;
};

/// A subsystem specification resolved against one Gridworld.
struct IndexedSubsystem {
    SubsystemId id = 0;
    std::vector<StateIndex> entries;  // sorted
    std::vector<bool> exit;           // mask over state indices
    int horizon = 0;
    bool all_entries_exit = false;

    static IndexedSubsystem from(const Gridworld& world, const SubsystemSpec& spec);
};

struct RolloutResult {
    bool success = false;
    StateIndex final_state = 0;
    int steps = 0;
};

/// Runs `policy` from `start` until an exit state, lava, or the horizon.
RolloutResult run_subsystem(const Gridworld& world, const IndexedSubsystem& sub, const Policy& policy,
                            StateIndex start, Rng& rng);

}  // namespace icrl
