#include "icrl/hlm_plan.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace icrl {

namespace {

constexpr double kTieTolerance = 1e-12;

template <class Backup>
ValueVector iterate(const Hlm& hlm, const ValueIterationOptions& options, Backup backup) {
    const std::size_t n = hlm.num_states();
    ValueVector out;
    out.v.assign(n, 0.0);
    out.v[static_cast<std::size_t>(hlm.goal_state)] = 1.0;
    std::vector<double> next = out.v;

    double residual = 0.0;
    while (out.sweeps < options.max_sweeps) {
        ++out.sweeps;
        residual = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (hlm.is_terminal(static_cast<AbstractIndex>(s))) continue;
            next[s] = backup(s, out.v);
            residual = std::max(residual, std::abs(next[s] - out.v[s]));
        }
        out.v.swap(next);
        if (residual <= options.tolerance) return out;
    }
    throw NonConvergence(fmt::format("value iteration stopped after {} sweeps with residual {}", out.sweeps, residual));
}

}  // namespace

ValueVector max_reachability(const Hlm& hlm, const ParamVector& p, const ValueIterationOptions& options) {
    p.validate(hlm.num_subsystems());
    return iterate(hlm, options, [&](std::size_t s, const std::vector<double>& v) {
        double best = 0.0;
        for (SubsystemId c : hlm.available[s]) {
            const auto id = static_cast<std::size_t>(c);
            best = std::max(best, p[id] * v[static_cast<std::size_t>(hlm.succ[id])]);
        }
        return best;
    });
}

ValueVector policy_reachability(const Hlm& hlm, const ParamVector& p, const MetaPolicy& meta,
                                const ValueIterationOptions& options) {
    p.validate(hlm.num_subsystems());
    return iterate(hlm, options, [&](std::size_t s, const std::vector<double>& v) {
        if (!meta.has_choice(static_cast<AbstractIndex>(s))) return 0.0;
        const auto id = static_cast<std::size_t>(meta.choice[s]);
        return p[id] * v[static_cast<std::size_t>(hlm.succ[id])];
    });
}

MetaPolicy extract_meta_policy(const Hlm& hlm, const ParamVector& p) {
    return extract_meta_policy(hlm, p, max_reachability(hlm, p));
}

MetaPolicy extract_meta_policy(const Hlm& hlm, const ParamVector& p, const ValueVector& values) {
    const std::size_t n = hlm.num_states();
    MetaPolicy meta;
    meta.choice.assign(n, -1);

    auto q = [&](SubsystemId c) {
        const auto id = static_cast<std::size_t>(c);
        return p[id] * values[static_cast<std::size_t>(hlm.succ[id])];
    };

    // Optimal action sets; states with value zero simply take the smallest id.
    std::vector<std::vector<SubsystemId>> optimal(n);
    std::vector<bool> settled(n, false);
    settled[static_cast<std::size_t>(hlm.goal_state)] = true;
    for (std::size_t s = 0; s < n; ++s) {
        const auto& avail = hlm.available[s];
        if (hlm.is_terminal(static_cast<AbstractIndex>(s)) || avail.empty()) continue;
        double best = 0.0;
        for (SubsystemId c : avail) best = std::max(best, q(c));
        if (best <= 0.0) {
            meta.choice[s] = avail.front();
            continue;
        }
        for (SubsystemId c : avail) {
            if (q(c) >= best - kTieTolerance) optimal[s].push_back(c);
        }
    }

    // Settle states in rounds outward from the goal so each choice points at a
    // class that already reaches the goal under the policy.
    bool changed = true;
    while (changed) {
        changed = false;
        const std::vector<bool> previous = settled;
        for (std::size_t s = 0; s < n; ++s) {
            if (settled[s] || optimal[s].empty()) continue;
            for (SubsystemId c : optimal[s]) {
                if (previous[static_cast<std::size_t>(hlm.succ[static_cast<std::size_t>(c)])]) {
                    meta.choice[s] = c;
                    settled[s] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!settled[s] && !optimal[s].empty()) meta.choice[s] = optimal[s].front();
    }
    return meta;
}

double predict_task_success(const Hlm& hlm, const ParamVector& sigma_hat) {
    return max_reachability(hlm, sigma_hat)[static_cast<std::size_t>(hlm.init_state)];
}

SubsystemId lift(const MetaPolicy& meta, const Hlm& hlm, const EnvState& s) {
    const AbstractIndex cls = abstract_of(hlm, s);
    if (!meta.has_choice(cls)) {
        throw NoSubsystemAvailable(fmt::format("no subsystem available from state {}", to_string(s)));
    }
    return meta.choice[static_cast<std::size_t>(cls)];
}

}  // namespace icrl
