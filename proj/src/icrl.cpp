#include "icrl/icrl.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace icrl {

namespace {

// Guards against meta-policies that cycle through successful subsystems.
constexpr int kMaxHopsPerSubsystem = 64;

std::string format_value(double v) { return fmt::format("{:.10g}", v); }

}  // namespace

std::string RunLog::csv_header() const {
    std::string out = "iteration,total_steps,trained_id";
    for (std::size_t c = 0; c < num_subsystems; ++c) out += fmt::format(",sigma_hat_{}", c);
    for (std::size_t c = 0; c < num_subsystems; ++c) out += fmt::format(",p_{}", c);
    out += ",predicted_success,empirical_success,feasible";
    return out;
}

std::string RunLog::csv_row(const RunLogRow& row) const {
    std::string out = fmt::format("{},{},{}", row.iteration, row.total_steps, row.trained);
    for (double v : row.sigma_hat) out += "," + format_value(v);
    for (double v : row.p) out += "," + format_value(v);
    out += "," + format_value(row.predicted);
    out += "," + (row.empirical ? format_value(*row.empirical) : std::string());
    out += row.feasible ? ",1" : ",0";
    return out;
}

void RunLog::write_csv(std::ostream& out) const {
    out << csv_header() << '\n';
    for (const auto& row : rows) out << csv_row(row) << '\n';
}

std::uint64_t IcrlResult::total_steps() const {
    std::uint64_t total = 0;
    for (const auto& s : subsystems) total += s.steps;
    return total;
}

SubsystemId select_subsystem(const ParamVector& p, const ParamVector& sigma_hat, const std::vector<bool>& exhausted,
                             const std::vector<SubsystemId>& support_path) {
    const std::size_t k = p.size();
    if (sigma_hat.size() != k || exhausted.size() != k) throw std::invalid_argument("select_subsystem: size mismatch");

    SubsystemId best = -1;
    double best_gap = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        if (exhausted[c]) continue;
        const double gap = p[c] - sigma_hat[c];
        if (best < 0 || gap > best_gap) {
            best = static_cast<SubsystemId>(c);
            best_gap = gap;
        }
    }
    if (best < 0) throw AllExhausted();
    if (best_gap > 0.0) return best;

    std::vector<SubsystemId> on_path(support_path);
    std::sort(on_path.begin(), on_path.end());
    for (SubsystemId c : on_path) {
        if (!exhausted[static_cast<std::size_t>(c)]) return c;
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (!exhausted[c]) return static_cast<SubsystemId>(c);
    }
    throw AllExhausted();
}

double evaluate_meta_policy(const Gridworld& world, const Hlm& hlm, const std::vector<SubsystemSpec>& specs,
                            const std::vector<Policy>& policies, const MetaPolicy& meta, const EnvState& init,
                            std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("need at least one evaluation episode");
    std::vector<IndexedSubsystem> subs;
    subs.reserve(specs.size());
    for (const auto& spec : specs) subs.push_back(IndexedSubsystem::from(world, spec));
    const int max_hops = kMaxHopsPerSubsystem * static_cast<int>(specs.size());

    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, StreamTag::Rollout, 1, i));
        EnvState state = init;
        for (int hop = 0; hop < max_hops; ++hop) {
            const AbstractIndex cls = abstract_of(hlm, state);
            if (cls == hlm.fail_state) break;
            const SubsystemId c = lift(meta, hlm, state);
            const auto id = static_cast<std::size_t>(c);
            const RolloutResult r = run_subsystem(world, subs[id], policies[id], world.index_of(state), rng);
            if (!r.success) break;
            if (hlm.reaches_target[id]) {
                ++wins;
                break;
            }
            state = world.state_at(r.final_state);
        }
    }
    return static_cast<double>(wins) / static_cast<double>(n);
}

IcrlResult icrl_run(const Gridworld& world, std::vector<SubsystemSpec> specs, const EnvState& init,
                    const StateSet& target, const IcrlConfig& config, const TrainerFactory& factory,
                    const RowCallback& on_row) {
    config.training.validate();
    std::sort(specs.begin(), specs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    IcrlResult result;
    result.hlm = build_hlm(specs, init, target);
    const Hlm& hlm = result.hlm;
    const std::size_t k = specs.size();
    result.log.num_subsystems = k;

    for (const auto& spec : specs) {
        Subsystem sub;
        sub.spec = spec;
        sub.trainer = factory(world, spec, config.training);
        result.subsystems.push_back(std::move(sub));
    }

    ParamVector sigma_hat = ParamVector::filled(k, 0.0);
    std::vector<std::optional<double>> lower(k, 0.0);
    std::vector<std::optional<double>> upper(k);
    std::vector<bool> exhausted(k, false);
    // U holds exactly the ids whose budget is spent, which with a zero budget
    // is everyone from the start.
    for (std::size_t c = 0; c < k; ++c) {
        if (result.subsystems[c].steps >= config.training.n_max) {
            exhausted[c] = true;
            upper[c] = sigma_hat[c];
        }
    }

    std::uint64_t total_steps = 0;
    double predicted = 0.0;
    while (predicted <= 1.0 - config.delta) {
        DecompositionProblem problem{&hlm, config.delta, lower, upper};
        const DecompositionResult decomposition = solve_decomposition(problem);
        if (!decomposition.feasible || std::all_of(exhausted.begin(), exhausted.end(), [](bool b) { return b; })) {
            result.termination = Termination::Infeasible;
            RunLogRow row;
            row.iteration = result.iterations + 1;
            row.total_steps = total_steps;
            row.sigma_hat = sigma_hat.values();
            row.p = decomposition.p.values();
            row.predicted = predicted;
            row.feasible = false;
            row.lower = problem.lower;
            row.upper = problem.upper;
            result.log.rows.push_back(std::move(row));
            if (on_row) on_row(result.log, result.log.rows.back());
            break;
        }

        ++result.iterations;
        const int iteration = result.iterations;
        const SubsystemId j = select_subsystem(decomposition.p, sigma_hat, exhausted, decomposition.support_path);
        const auto jj = static_cast<std::size_t>(j);
        Subsystem& chosen = result.subsystems[jj];

        Rng train_rng(derive_seed(config.seed, StreamTag::Train, jj, static_cast<std::uint64_t>(iteration)));
        chosen.trainer->train(config.training.n_train, train_rng);
        chosen.steps += config.training.n_train;
        total_steps += config.training.n_train;

        const SuccessEstimate estimate =
            estimate_success(world, chosen.spec, chosen.trainer->policy(), config.estimation,
                             derive_seed(config.seed, StreamTag::Estimate, jj, static_cast<std::uint64_t>(iteration)));
        chosen.sigma_hat = estimate.sigma_hat;
        sigma_hat[jj] = estimate.sigma_hat;
        lower[jj] = estimate.sigma_hat;
        if (chosen.steps >= config.training.n_max) {
            exhausted[jj] = true;
            upper[jj] = estimate.sigma_hat;
        }

        const ValueVector values = max_reachability(hlm, sigma_hat);
        result.meta = extract_meta_policy(hlm, sigma_hat, values);
        predicted = values[static_cast<std::size_t>(hlm.init_state)];

        RunLogRow row;
        row.iteration = iteration;
        row.total_steps = total_steps;
        row.trained = j;
        row.sigma_hat = sigma_hat.values();
        row.p = decomposition.p.values();
        row.predicted = predicted;
        row.feasible = true;
        row.lower = problem.lower;
        row.upper = problem.upper;
        row.support_path = decomposition.support_path;

        if (config.eval_every > 0 && iteration % config.eval_every == 0) {
            std::vector<Policy> policies;
            policies.reserve(k);
            for (const auto& s : result.subsystems) policies.push_back(s.trainer->policy());
            row.empirical = evaluate_meta_policy(
                world, hlm, specs, policies, result.meta, init, config.eval_rollouts,
                derive_seed(config.seed, StreamTag::Evaluate, 0, static_cast<std::uint64_t>(iteration)));
            result.final_empirical = row.empirical;
        }
        result.log.rows.push_back(std::move(row));
        if (on_row) on_row(result.log, result.log.rows.back());
    }

    if (result.iterations == 0) result.meta = extract_meta_policy(hlm, sigma_hat);
    result.predicted = predicted;
    const bool stale = result.log.rows.empty() || !result.log.rows.back().empirical;
    if (stale && config.eval_rollouts > 0) {
        std::vector<Policy> policies;
        for (const auto& s : result.subsystems) policies.push_back(s.trainer->policy());
        result.final_empirical =
            evaluate_meta_policy(world, hlm, specs, policies, result.meta, init, config.eval_rollouts,
                                 derive_seed(config.seed, StreamTag::Evaluate, 1, static_cast<std::uint64_t>(result.iterations)));
    }
    return result;
}

}  // namespace icrl
