#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "icrl/config.hpp"
#include "icrl/decompose.hpp"

namespace testing_helpers {

inline icrl::Config labyrinth_config() {
    return icrl::load_config(std::string(ICRL_DATA_DIR) + "/labyrinth.json");
}

/// HLM built directly from an edge list. Subsystem i goes from edges[i].first
/// to edges[i].second; a target of -1 means the goal class.
inline icrl::Hlm make_hlm(int non_terminal, const std::vector<std::pair<int, int>>& edges, int init = 0) {
    icrl::Hlm h;
    h.classes.assign(static_cast<std::size_t>(non_terminal + 2), {});
    h.init_state = init;
    h.goal_state = non_terminal;
    h.fail_state = non_terminal + 1;
    h.available.assign(h.classes.size(), {});
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto [from, to] = edges[i];
        h.available[static_cast<std::size_t>(from)].push_back(static_cast<int>(i));
        h.succ.push_back(to < 0 ? h.goal_state : to);
        h.reaches_target.push_back(to < 0);
    }
    return h;
}

/// init -> s1 -> ... -> goal, one subsystem per hop.
inline icrl::Hlm chain_hlm(int length) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < length; ++i) edges.emplace_back(i, i + 1 == length ? -1 : i + 1);
    return make_hlm(length, edges);
}

}  // namespace testing_helpers

namespace testing_helpers {

struct RandomProblem {
    icrl::Hlm hlm;
    icrl::DecompositionProblem problem;
};

/// Random HLM with at most four subsystems and random L/U bounds. The
/// problem's hlm pointer refers into the returned object, so keep it in place.
inline std::unique_ptr<RandomProblem> random_problem(icrl::Rng& rng) {
    auto out = std::make_unique<RandomProblem>();
    const int states = 1 + static_cast<int>(icrl::uniform_index(rng, 3));
    const int k = 1 + static_cast<int>(icrl::uniform_index(rng, 4));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i) {
        const int from = i == 0 ? 0 : static_cast<int>(icrl::uniform_index(rng, static_cast<std::uint64_t>(states)));
        const int to = static_cast<int>(icrl::uniform_index(rng, static_cast<std::uint64_t>(states + 1))) - 1;
        edges.emplace_back(from, to == from ? -1 : to);
    }
    out->hlm = make_hlm(states, edges);
    auto& pr = out->problem;
    pr.hlm = &out->hlm;
    pr.delta = 0.01 + 0.29 * icrl::uniform01(rng);
    pr.lower.assign(static_cast<std::size_t>(k), std::nullopt);
    pr.upper.assign(static_cast<std::size_t>(k), std::nullopt);
    for (int i = 0; i < k; ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (icrl::uniform01(rng) < 0.5) pr.lower[u] = 0.9 * icrl::uniform01(rng);
        if (icrl::uniform01(rng) < 0.4) {
            const double lo = pr.lower[u].value_or(0.0);
            pr.upper[u] = lo + (1.0 - lo) * icrl::uniform01(rng);
        }
    }
    return out;
}

}  // namespace testing_helpers

namespace testing_helpers {

/// A three-room strip with lava between the rooms, for quick end-to-end runs.
inline const char* kStripMap =
    "###########\n"
    "#S........#\n"
    "#.LL.L.LL.#\n"
    "#........G#\n"
    "###########\n";

/// c0: start -> (4,1), c1: (4,1) -> (7,1), c2: (7,1) -> goal cell.
inline std::vector<icrl::SubsystemSpec> strip_specs(int horizon = 40) {
    using icrl::expand_cells;
    return {{0, expand_cells({{1, 1}}), expand_cells({{4, 1}}), horizon},
            {1, expand_cells({{4, 1}}), expand_cells({{7, 1}}), horizon},
            {2, expand_cells({{7, 1}}), expand_cells({{9, 3}}), horizon}};
}

inline icrl::EnvState strip_init() { return {1, 1, icrl::Orientation::E, icrl::Status::Alive}; }

}  // namespace testing_helpers
