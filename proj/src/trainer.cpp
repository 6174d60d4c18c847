#include "icrl/trainer.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace icrl {

namespace {
constexpr const char* kQTableMagic = "icrl-qtable";
constexpr int kQTableVersion = 1;
}  // namespace

void TrainerParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
    if (!(epsilon_end >= 0.0 && epsilon_end <= epsilon_start && epsilon_start <= 1.0)) {
        throw std::invalid_argument("need 0 <= epsilon_end <= epsilon_start <= 1");
    }
}

double TrainerParams::epsilon_after(std::uint64_t steps_trained) const {
    if (n_max == 0) return epsilon_end;
    if (steps_trained >= n_max) return epsilon_end;
    const double frac = static_cast<double>(steps_trained) / static_cast<double>(n_max);
    return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

QTable::QTable(std::size_t num_states) : q_(num_states * kNumActions, 0.0), visits_(num_states * kNumActions, 0) {}

bool QTable::seen(StateIndex s) const {
    for (Action a : kActions) {
        if (visits(s, a) > 0) return true;
    }
    return false;
}

double QTable::max_value(StateIndex s) const {
    const auto* row = &q_[slot(s, Action::TurnLeft)];
    return std::max({row[0], row[1], row[2]});
}

Action QTable::greedy_action(StateIndex s) const {
    const auto* row = &q_[slot(s, Action::TurnLeft)];
    std::size_t best = 0;
    for (std::size_t a = 1; a < kNumActions; ++a) {
        if (row[a] > row[best]) best = a;
    }
    return kActions[best];
}

void QTable::save(std::ostream& out, const Gridworld& world) const {
    if (num_states() != world.num_states()) throw std::invalid_argument("Q-table does not match the environment");
    out << fmt::format("{} {} {} {} {} {}\n", kQTableMagic, kQTableVersion, world.map().width(), world.map().height(),
                       steps_trained, episodes);
    for (StateIndex s = 0; s < world.dead_index(); ++s) {
        const EnvState st = world.state_at(s);
        for (Action a : kActions) {
            if (visits(s, a) == 0 && value(s, a) == 0.0) continue;
            out << fmt::format("{} {} {} {} {:a} {}\n", st.x, st.y, static_cast<int>(st.orientation),
                               static_cast<int>(a), value(s, a), visits(s, a));
        }
    }
}

QTable QTable::load(std::istream& in, const Gridworld& world) {
    std::string magic;
    int version = 0;
    int width = 0;
    int height = 0;
    QTable table(world.num_states());
    if (!(in >> magic >> version >> width >> height >> table.steps_trained >> table.episodes) || magic != kQTableMagic) {
        throw std::runtime_error("not an icrl Q-table dump");
    }
    if (version != kQTableVersion) throw std::runtime_error(fmt::format("unsupported Q-table version {}", version));
    if (width != world.map().width() || height != world.map().height()) {
        throw std::runtime_error("Q-table dump was written for a different map");
    }
    int x = 0, y = 0, o = 0, a = 0;
    std::string value_text;
    std::uint64_t count = 0;
    while (in >> x >> y >> o >> a >> value_text >> count) {
        if (o < 0 || o > 3 || a < 0 || a > 2) throw std::runtime_error("corrupt Q-table entry");
        const StateIndex s = world.index_of({x, y, static_cast<Orientation>(o), Status::Alive});
        char* end = nullptr;
        const double v = std::strtod(value_text.c_str(), &end);
        if (end == value_text.c_str() || *end != '\0') throw std::runtime_error("corrupt Q-table value " + value_text);
        table.value(s, kActions[static_cast<std::size_t>(a)]) = v;
        table.visits(s, kActions[static_cast<std::size_t>(a)]) = count;
    }
    if (!in.eof()) throw std::runtime_error("trailing garbage in Q-table dump");
    return table;
}

RewardSignal subtask_reward(const SubsystemSpec& spec, const EnvState& s_next) {
    if (!s_next.alive()) return {0.0, true};
    if (spec.exit.contains(s_next)) return {1.0, true};
    return {0.0, false};
}

std::uint64_t train(const Gridworld& world, const SubsystemSpec& spec, QTable& table, const TrainerParams& params,
                    std::uint64_t steps, Rng& rng) {
    if (steps == 0) throw std::invalid_argument("train needs a positive step count");
    if (spec.entry.empty()) throw EmptyEntrySet(fmt::format("subsystem {} has no entry states", spec.id));
    params.validate();
    if (table.num_states() != world.num_states()) throw std::invalid_argument("Q-table does not match the environment");

    const IndexedSubsystem sub = IndexedSubsystem::from(world, spec);
    if (sub.all_entries_exit) {
        // Nothing to learn: every episode succeeds before the first step.
        table.steps_trained += steps;
        return steps;
    }

    std::uint64_t remaining = steps;
    while (remaining > 0) {
        StateIndex s = sub.entries[uniform_index(rng, sub.entries.size())];
        if (sub.exit[s]) continue;
        for (int t = 1; remaining > 0; ++t) {
            const double epsilon = params.epsilon_after(table.steps_trained);
            const Action a = uniform01(rng) < epsilon ? kActions[uniform_index(rng, kNumActions)] : table.greedy_action(s);
            const StateIndex next = world.sample(s, a, rng);
            --remaining;
            ++table.steps_trained;

            const bool reached = sub.exit[next];
            const bool terminal = reached || next == world.dead_index();
            // Horizon cut-offs bootstrap: the state itself is not absorbing.
            const double target = (reached ? 1.0 : 0.0) + (terminal ? 0.0 : params.gamma * table.max_value(next));
            double& q = table.value(s, a);
            q += params.alpha * (target - q);
            ++table.visits(s, a);

            if (terminal || t >= sub.horizon) {
                ++table.episodes;
                break;
            }
            s = next;
        }
    }
    return steps;
}

Policy greedy_policy(const QTable& table) {
    std::vector<Action> actions(table.num_states(), Action::Forward);
    for (StateIndex s = 0; s < table.num_states(); ++s) {
        if (table.seen(s)) actions[s] = table.greedy_action(s);
    }
    return Policy::deterministic(std::move(actions));
}

QLearningTrainer::QLearningTrainer(const Gridworld& world, SubsystemSpec spec, TrainerParams params)
    : world_(&world), spec_(std::move(spec)), params_(params), table_(world.num_states()) {
    params_.validate();
}

void QLearningTrainer::train(std::uint64_t steps, Rng& rng) {
    icrl::train(*world_, spec_, table_, params_, steps, rng);
}

TrainerFactory q_learning_factory() {
    return [](const Gridworld& world, const SubsystemSpec& spec, const TrainerParams& params) {
        return std::make_unique<QLearningTrainer>(world, spec, params);
    };
}

}  // namespace icrl
