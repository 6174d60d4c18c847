#pragma once

// Subsystem specifications, composability checks and construction of the
// high-level model (HLM): a parametric MDP over equivalence classes of
// environment states whose actions are subsystems.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "icrl/gridworld.hpp"

namespace icrl {

using SubsystemId = int;

struct SubsystemSpec {
    SubsystemId id = 0;
    StateSet entry;    // I_c
    StateSet exit;     // F_c
    int horizon = 100; // T_c
};

struct Violation {
    enum class Kind {
        EmptyEntry,
        EmptyExit,
        DeadMember,
        DuplicateId,
        ExitEntryOverlap,   // F_first partially overlaps I_second
        ExitTargetOverlap,  // F_first partially overlaps the target set
        NoTargetExit,
        EntryInTarget,
        InitNotCovered,
    };
    Kind kind;
    SubsystemId first = -1;
    SubsystemId second = -1;
    std::string message;
};

struct ComposabilityReport {
    std::vector<Violation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::string describe() const;
};

/// Composability is reported as data: an empty report means the collection
/// can be assembled into an HLM.
ComposabilityReport check_composable(std::span<const SubsystemSpec> specs, const StateSet& target,
                                     const EnvState& init);

using AbstractIndex = int;

struct Hlm {
    /// Member states per class. The failure class stays empty: it stands for
    /// every state not listed elsewhere.
    std::vector<StateSet> classes;
    AbstractIndex init_state = -1;
    AbstractIndex goal_state = -1;
    AbstractIndex fail_state = -1;
    /// C(s~): subsystem ids executable from each class, ascending.
    std::vector<std::vector<SubsystemId>> available;
    /// succ(c), indexed by subsystem id.
    std::vector<AbstractIndex> succ;
    /// F_c == F_targ, indexed by subsystem id.
    std::vector<bool> reaches_target;
    std::map<EnvState, AbstractIndex> lookup;

    [[nodiscard]] std::size_t num_states() const { return classes.size(); }
    [[nodiscard]] std::size_t num_subsystems() const { return succ.size(); }
    [[nodiscard]] bool is_terminal(AbstractIndex s) const { return s == goal_state || s == fail_state; }
};

/// Quotient by "same membership in every I_c and in F_targ". Non-terminal
/// classes are ordered by their smallest member state, followed by the goal
/// and failure classes. Subsystem ids must be dense 0..k-1.
Hlm build_hlm(std::span<const SubsystemSpec> specs, const EnvState& init, const StateSet& target);

/// [s]_R; states outside every entry set and the target map to fail_state.
AbstractIndex abstract_of(const Hlm& hlm, const EnvState& s);

/// One success probability per subsystem id.
class ParamVector {
public:
    ParamVector() = default;
    explicit ParamVector(std::vector<double> values);
    static ParamVector filled(std::size_t k, double value) { return ParamVector(std::vector<double>(k, value)); }

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

    /// Throws std::invalid_argument unless every entry is in [0, 1].
    void validate(std::size_t expected_size) const;

private:
    std::vector<double> values_;
};

}  // namespace icrl
