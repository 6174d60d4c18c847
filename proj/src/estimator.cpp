#include "icrl/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace icrl {

Interval hoeffding_interval(double sigma_hat, std::uint64_t n, double beta) {
    if (n == 0) throw std::invalid_argument("Hoeffding interval needs n >= 1");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    const double w = std::sqrt(std::log(2.0 / beta) / (2.0 * static_cast<double>(n)));
    return {std::max(0.0, sigma_hat - w), std::min(1.0, sigma_hat + w)};
}

SuccessEstimate estimate_success(const Gridworld& world, const SubsystemSpec& spec, const Policy& policy,
                                 const EstimationOptions& options, std::uint64_t seed) {
    if (options.n_rollouts == 0) throw std::invalid_argument("need at least one rollout");
    if (spec.entry.empty()) throw EmptyEntrySet(fmt::format("subsystem {} has no entry states", spec.id));
    const IndexedSubsystem sub = IndexedSubsystem::from(world, spec);

    SuccessEstimate est;
    est.n = options.n_rollouts;
    if (options.strict_min_mode) {
        double worst = 1.0;
        for (std::size_t e = 0; e < sub.entries.size(); ++e) {
            std::uint64_t wins = 0;
            for (std::uint64_t i = 0; i < options.n_rollouts; ++i) {
                Rng rng(derive_seed(seed, StreamTag::Rollout, e, i));
                wins += run_subsystem(world, sub, policy, sub.entries[e], rng).success ? 1 : 0;
            }
            worst = std::min(worst, static_cast<double>(wins) / static_cast<double>(options.n_rollouts));
        }
        est.sigma_hat = worst;
    } else {
        std::uint64_t wins = 0;
        for (std::uint64_t i = 0; i < options.n_rollouts; ++i) {
            Rng rng(derive_seed(seed, StreamTag::Rollout, 0, i));
            const StateIndex start = sub.entries[uniform_index(rng, sub.entries.size())];
            wins += run_subsystem(world, sub, policy, start, rng).success ? 1 : 0;
        }
        est.sigma_hat = static_cast<double>(wins) / static_cast<double>(options.n_rollouts);
    }
    const Interval bounds = hoeffding_interval(est.sigma_hat, est.n, options.beta);
    est.lo = bounds.lo;
    est.hi = bounds.hi;
    return est;
}

std::vector<double> reach_within(const Gridworld& world, const IndexedSubsystem& sub, const Policy& policy, int t) {
    const std::size_t n = world.num_states();
    std::vector<double> u(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) u[s] = sub.exit[s] ? 1.0 : 0.0;
    std::vector<double> next(n, 0.0);
    for (int step = 0; step < t; ++step) {
        for (StateIndex s = 0; s < world.dead_index(); ++s) {
            if (sub.exit[s]) {
                next[s] = 1.0;
                continue;
            }
            const auto& dist = policy.distribution(s);
            double v = 0.0;
            for (std::size_t a = 0; a < kNumActions; ++a) {
                if (dist[a] == 0.0) continue;
                double qa = 0.0;
                for (const auto& o : world.successors(s, kActions[a])) qa += o.probability * u[o.next];
                v += dist[a] * qa;
            }
            next[s] = v;
        }
        next[world.dead_index()] = 0.0;
        u.swap(next);
    }
    return u;
}

ExactSuccess exact_subtask_success(const Gridworld& world, const SubsystemSpec& spec, const Policy& policy) {
    if (spec.entry.empty()) throw EmptyEntrySet(fmt::format("subsystem {} has no entry states", spec.id));
    const IndexedSubsystem sub = IndexedSubsystem::from(world, spec);
    const auto u = reach_within(world, sub, policy, spec.horizon);

    ExactSuccess out;
    out.min = 1.0;
    double sum = 0.0;
    for (const EnvState& s : spec.entry) {
        const double v = u[world.index_of(s)];
        out.per_entry.emplace(s, v);
        out.min = std::min(out.min, v);
        sum += v;
    }
    out.mean = sum / static_cast<double>(spec.entry.size());
    return out;
}

}  // namespace icrl
