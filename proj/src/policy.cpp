#include "icrl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icrl {

Policy Policy::deterministic(std::vector<Action> actions) {
    Policy p;
    p.deterministic_ = true;
    p.dist_.resize(actions.size());
    for (std::size_t s = 0; s < actions.size(); ++s) {
        p.dist_[s].fill(0.0);
        p.dist_[s][static_cast<std::size_t>(actions[s])] = 1.0;
    }
    p.actions_ = std::move(actions);
    return p;
}

Policy Policy::stochastic(std::vector<ActionDistribution> distributions) {
    Policy p;
    p.dist_ = std::move(distributions);
    p.actions_.assign(p.dist_.size(), Action::Forward);
    for (const auto& d : p.dist_) {
        double sum = 0.0;
        for (double x : d) {
            if (x < 0.0) throw std::invalid_argument("negative action probability");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("action probabilities must sum to 1");
    }
    return p;
}

Policy Policy::uniform(std::size_t num_states) {
    return stochastic(std::vector<ActionDistribution>(num_states, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}));
}

Action Policy::act(StateIndex s, Rng& rng) const {
    if (deterministic_) return actions_[s];
    const auto& d = dist_[s];
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t a = 0; a < kNumActions; ++a) {
        acc += d[a];
        if (u < acc) return kActions[a];
    }
    return kActions.back();
}

IndexedSubsystem IndexedSubsystem::from(const Gridworld& world, const SubsystemSpec& spec) {
    IndexedSubsystem out;
    out.id = spec.id;
    out.horizon = spec.horizon;
    out.exit = world.mask_of(spec.exit);
    for (const EnvState& s : spec.entry) out.entries.push_back(world.index_of(s));
    std::sort(out.entries.begin(), out.entries.end());
    out.all_entries_exit = std::all_of(out.entries.begin(), out.entries.end(), [&](StateIndex s) { return out.exit[s]; });
    return out;
}

RolloutResult run_subsystem(const Gridworld& world, const IndexedSubsystem& sub, const Policy& policy,
                            StateIndex start, Rng& rng) {
    RolloutResult r;
    r.final_state = start;
    if (sub.exit[start]) {
        r.success = true;
        return r;
    }
    StateIndex s = start;
    while (r.steps < sub.horizon) {
        s = world.sample(s, policy.act(s, rng), rng);
        ++r.steps;
        if (sub.exit[s]) {
            r.success = true;
            break;
        }
        if (s == world.dead_index()) break;
    }
    r.final_state = s;
    return r;
}

}  // namespace icrl
