#pragma once

// Subsystem training. The loop only talks to SubsystemTrainer, so any RL
// method that can report a policy fits; tabular Q-learning is the default.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "icrl/policy.hpp"

namespace icrl {

struct TrainerParams {
    double alpha = 0.1;
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    std::uint64_t n_train = 50'000;
    std::uint64_t n_max = 500'000;

    void validate() const;
    /// Linear decay from epsilon_start to epsilon_end over n_max steps.
    [[nodiscard]] double epsilon_after(std::uint64_t steps_trained) const;
};

class QTable {
public:
    QTable() = default;
    explicit QTable(std::size_t num_states);

    [[nodiscard]] std::size_t num_states() const { return q_.size() / kNumActions; }
    [[nodiscard]] double value(StateIndex s, Action a) const { return q_[slot(s, a)]; }
    double& value(StateIndex s, Action a) { return q_[slot(s, a)]; }
    [[nodiscard]] std::uint64_t visits(StateIndex s, Action a) const { return visits_[slot(s, a)]; }
    std::uint64_t& visits(StateIndex s, Action a) { return visits_[slot(s, a)]; }
    [[nodiscard]] bool seen(StateIndex s) const;
    [[nodiscard]] double max_value(StateIndex s) const;
    [[nodiscard]] Action greedy_action(StateIndex s) const;

    /// Environment transitions consumed by train() so far (N_c).
    std::uint64_t steps_trained = 0;
    /// Completed episodes; a truncated final episode of a call is not counted.
    std::uint64_t episodes = 0;

    /// Text dump "x y orientation action value visits" per touched entry,
    /// values as hex floats so a reload is bit-exact.
    void save(std::ostream& out, const Gridworld& world) const;
    static QTable load(std::istream& in, const Gridworld& world);

    bool operator==(const QTable&) const = default;

private:
    static std::size_t slot(StateIndex s, Action a) { return s * kNumActions + static_cast<std::size_t>(a); }
    std::vector<double> q_;
    std::vector<std::uint64_t> visits_;
};

struct RewardSignal {
    double reward = 0.0;
    bool terminal = false;
};

/// 1 when s_next is an exit state, 0 otherwise; exits and lava end the episode.
RewardSignal subtask_reward(const SubsystemSpec& spec, const EnvState& s_next);

/// Epsilon-greedy Q-learning for exactly `steps` environment transitions.
/// Episodes start uniformly over the entry set and end on an exit, lava or
/// the subsystem horizon; they never span calls. Returns the steps consumed.
std::uint64_t train(const Gridworld& world, const SubsystemSpec& spec, QTable& table, const TrainerParams& params,
                    std::uint64_t steps, Rng& rng);

/// Argmax over actions with ties to the lowest action index; states never
/// visited map to Forward.
Policy greedy_policy(const QTable& table);

class SubsystemTrainer {
public:
    virtual ~SubsystemTrainer() = default;
    virtual void train(std::uint64_t steps, Rng& rng) = 0;
    [[nodiscard]] virtual Policy policy() const = 0;
    [[nodiscard]] virtual std::uint64_t steps_trained() const = 0;
    virtual void save(std::ostream& out) const = 0;
};

class QLearningTrainer final : public SubsystemTrainer {
public:
    QLearningTrainer(const Gridworld& world, SubsystemSpec spec, TrainerParams params);

    void train(std::uint64_t steps, Rng& rng) override;
    [[nodiscard]] Policy policy() const override { return greedy_policy(table_); }
    [[nodiscard]] std::uint64_t steps_trained() const override { return table_.steps_trained; }
    void save(std::ostream& out) const override { table_.save(out, *world_); }

    [[nodiscard]] const QTable& table() const { return table_; }

private:
    const Gridworld* world_;
    SubsystemSpec spec_;
    TrainerParams params_;
    QTable table_;
};

using TrainerFactory =
    std::function<std::unique_ptr<SubsystemTrainer>(const Gridworld&, const SubsystemSpec&, const TrainerParams&)>;

TrainerFactory q_learning_factory();

}  // namespace icrl
