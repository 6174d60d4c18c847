#include "icrl/subsystems.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace icrl {

namespace {

enum class Overlap { Disjoint, Subset, Partial };

Overlap classify(const StateSet& inner, const StateSet& outer) {
    std::size_t shared = 0;
    for (const EnvState& s : inner) shared += outer.contains(s) ? 1 : 0;
    if (shared == 0) return Overlap::Disjoint;
    if (shared == inner.size()) return Overlap::Subset;
    return Overlap::Partial;
}

}  // namespace

std::string ComposabilityReport::describe() const {
    if (ok()) return "composable";
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += '\n';
        out += v.message;
    }
    return out;
}

ComposabilityReport check_composable(std::span<const SubsystemSpec> specs, const StateSet& target,
                                     const EnvState& init) {
    ComposabilityReport report;
    auto add = [&](Violation::Kind kind, SubsystemId a, SubsystemId b, std::string msg) {
        report.violations.push_back({kind, a, b, std::move(msg)});
    };

    std::set<SubsystemId> seen;
    for (const auto& c : specs) {
        if (!seen.insert(c.id).second) add(Violation::Kind::DuplicateId, c.id, -1, fmt::format("duplicate subsystem id {}", c.id));
        if (c.entry.empty()) add(Violation::Kind::EmptyEntry, c.id, -1, fmt::format("subsystem {} has no entry states", c.id));
        if (c.exit.empty()) add(Violation::Kind::EmptyExit, c.id, -1, fmt::format("subsystem {} has no exit states", c.id));
        const auto dead = [](const EnvState& s) { return !s.alive(); };
        if (std::any_of(c.entry.begin(), c.entry.end(), dead) || std::any_of(c.exit.begin(), c.exit.end(), dead)) {
            add(Violation::Kind::DeadMember, c.id, -1, fmt::format("subsystem {} lists a LavaDead state", c.id));
        }
    }

    for (const auto& from : specs) {
        for (const auto& to : specs) {
            if (classify(from.exit, to.entry) == Overlap::Partial) {
                add(Violation::Kind::ExitEntryOverlap, from.id, to.id,
                    fmt::format("exit set of subsystem {} partially overlaps entry set of subsystem {}", from.id, to.id));
            }
        }
    }

    bool any_target_exit = false;
    for (const auto& c : specs) {
        if (c.exit == target) {
            any_target_exit = true;
            continue;
        }
        if (classify(c.exit, target) != Overlap::Disjoint) {
            add(Violation::Kind::ExitTargetOverlap, c.id, -1,
                fmt::format("exit set of subsystem {} neither equals nor avoids the target set", c.id));
        }
    }
    if (!any_target_exit) add(Violation::Kind::NoTargetExit, -1, -1, "no subsystem has the target set as its exit set");

    for (const auto& c : specs) {
        if (classify(c.entry, target) != Overlap::Disjoint) {
            add(Violation::Kind::EntryInTarget, c.id, -1,
                fmt::format("entry set of subsystem {} intersects the target set", c.id));
        }
    }

    const bool covered = std::any_of(specs.begin(), specs.end(), [&](const auto& c) { return c.entry.contains(init); });
    if (!covered) add(Violation::Kind::InitNotCovered, -1, -1, "initial state " + to_string(init) + " is in no entry set");
    return report;
}

Hlm build_hlm(std::span<const SubsystemSpec> specs, const EnvState& init, const StateSet& target) {
    if (specs.empty()) throw NotComposable("no subsystems given");
    const auto report = check_composable(specs, target, init);
    if (!report.ok()) throw NotComposable(report.describe());

    const std::size_t k = specs.size();
    std::vector<const SubsystemSpec*> by_id(k, nullptr);
    for (const auto& c : specs) {
        if (c.id < 0 || static_cast<std::size_t>(c.id) >= k) {
            throw NotComposable(fmt::format("subsystem ids must be dense 0..{}, got {}", k - 1, c.id));
        }
        by_id[static_cast<std::size_t>(c.id)] = &c;
    }

    // Membership signature of every state lying in some entry set. Target
    // states carry no entry membership (checked above) and form their own class.
    std::map<EnvState, std::vector<bool>> signature;
    for (std::size_t id = 0; id < k; ++id) {
        for (const EnvState& s : by_id[id]->entry) {
            auto& sig = signature[s];
            if (sig.empty()) sig.assign(k, false);
            sig[id] = true;
        }
    }

    std::map<std::vector<bool>, StateSet> groups;
    for (const auto& [s, sig] : signature) groups[sig].insert(s);
    std::vector<StateSet> ordered;
    ordered.reserve(groups.size());
    for (auto& [sig, members] : groups) ordered.push_back(std::move(members));
    std::sort(ordered.begin(), ordered.end(), [](const StateSet& a, const StateSet& b) { return *a.begin() < *b.begin(); });

    Hlm hlm;
    hlm.classes = std::move(ordered);
    hlm.goal_state = static_cast<AbstractIndex>(hlm.classes.size());
    hlm.classes.push_back(target);
    hlm.fail_state = static_cast<AbstractIndex>(hlm.classes.size());
    hlm.classes.emplace_back();

    for (std::size_t i = 0; i < hlm.classes.size(); ++i) {
        for (const EnvState& s : hlm.classes[i]) hlm.lookup.emplace(s, static_cast<AbstractIndex>(i));
    }

    hlm.available.assign(hlm.classes.size(), {});
    for (std::size_t i = 0; i < static_cast<std::size_t>(hlm.goal_state); ++i) {
        const auto& sig = signature.at(*hlm.classes[i].begin());
        for (std::size_t id = 0; id < k; ++id) {
            if (sig[id]) hlm.available[i].push_back(static_cast<SubsystemId>(id));
        }
    }

    hlm.succ.assign(k, -1);
    hlm.reaches_target.assign(k, false);
    for (std::size_t id = 0; id < k; ++id) {
        const auto& exit = by_id[id]->exit;
        const AbstractIndex first = abstract_of(hlm, *exit.begin());
        for (const EnvState& s : exit) {
            if (abstract_of(hlm, s) != first) {
                throw NotComposable(fmt::format("exit states of subsystem {} span several abstract states", id));
            }
        }
        hlm.succ[id] = first;
        hlm.reaches_target[id] = exit == target;
    }

    hlm.init_state = abstract_of(hlm, init);
    return hlm;
}

AbstractIndex abstract_of(const Hlm& hlm, const EnvState& s) {
    if (!s.alive()) return hlm.fail_state;
    auto it = hlm.lookup.find(s);
    return it == hlm.lookup.end() ? hlm.fail_state : it->second;
}

ParamVector::ParamVector(std::vector<double> values) : values_(std::move(values)) {}

void ParamVector::validate(std::size_t expected_size) const {
    if (values_.size() != expected_size) {
        throw std::invalid_argument(fmt::format("parameter vector has {} entries, expected {}", values_.size(), expected_size));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
            throw std::invalid_argument(fmt::format("parameter {} = {} lies outside [0, 1]", i, values_[i]));
        }
    }
}

}  // namespace icrl
