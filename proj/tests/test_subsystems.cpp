#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "icrl/subsystems.hpp"

using namespace icrl;

namespace {

EnvState at(int x, int y, Orientation o = Orientation::E) { return {x, y, o, Status::Alive}; }

SubsystemSpec spec(int id, std::vector<CellPos> entry, std::vector<CellPos> exit) {
    return {id, expand_cells(entry), expand_cells(exit), 100};
}

bool has_kind(const ComposabilityReport& r, Violation::Kind k) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST(Composability, SubsetChainOk) {
    const auto target = expand_cells({{5, 1}});
    const std::vector<SubsystemSpec> specs{spec(0, {{1, 1}}, {{3, 1}}), spec(1, {{3, 1}}, {{5, 1}})};
    const auto r = check_composable(specs, target, at(1, 1));
    EXPECT_TRUE(r.ok()) << r.describe();
}

TEST(Composability, PartialOverlapReported) {
    const auto target = expand_cells({{5, 1}});
    const std::vector<SubsystemSpec> specs{spec(0, {{1, 1}}, {{3, 1}, {3, 2}}), spec(1, {{3, 1}}, {{5, 1}})};
    const auto r = check_composable(specs, target, at(1, 1));
    ASSERT_FALSE(r.ok());
    ASSERT_TRUE(has_kind(r, Violation::Kind::ExitEntryOverlap));
    const auto& v = r.violations.front();
    EXPECT_EQ(v.first, 0);
    EXPECT_EQ(v.second, 1);
}

TEST(Composability, TargetRules) {
    const auto target = expand_cells({{5, 1}});
    const std::vector<SubsystemSpec> no_target{spec(0, {{1, 1}}, {{3, 1}})};
    EXPECT_TRUE(has_kind(check_composable(no_target, target, at(1, 1)), Violation::Kind::NoTargetExit));

    const std::vector<SubsystemSpec> partial{spec(0, {{1, 1}}, {{5, 1}}), spec(1, {{1, 1}}, {{5, 1}, {4, 1}})};
    EXPECT_TRUE(has_kind(check_composable(partial, target, at(1, 1)), Violation::Kind::ExitTargetOverlap));

    const std::vector<SubsystemSpec> entry_in_target{spec(0, {{1, 1}}, {{5, 1}}), spec(1, {{5, 1}}, {{5, 1}})};
    EXPECT_TRUE(has_kind(check_composable(entry_in_target, target, at(1, 1)), Violation::Kind::EntryInTarget));
}

TEST(Composability, InitAndShapeRules) {
    const auto target = expand_cells({{5, 1}});
    const std::vector<SubsystemSpec> uncovered{spec(0, {{2, 1}}, {{5, 1}})};
    EXPECT_TRUE(has_kind(check_composable(uncovered, target, at(1, 1)), Violation::Kind::InitNotCovered));

    std::vector<SubsystemSpec> bad{spec(0, {{1, 1}}, {{5, 1}}), spec(0, {}, {})};
    const auto r = check_composable(bad, target, at(1, 1));
    EXPECT_TRUE(has_kind(r, Violation::Kind::DuplicateId));
    EXPECT_TRUE(has_kind(r, Violation::Kind::EmptyEntry));
    EXPECT_TRUE(has_kind(r, Violation::Kind::EmptyExit));

    std::vector<SubsystemSpec> dead{spec(0, {{1, 1}}, {{5, 1}})};
    dead[0].entry.insert({2, 2, Orientation::N, Status::LavaDead});
    EXPECT_TRUE(has_kind(check_composable(dead, target, at(1, 1)), Violation::Kind::DeadMember));
}

TEST(Composability, LabyrinthOk) {
    const auto cfg = testing_helpers::labyrinth_config();
    const auto r = check_composable(cfg.subsystems, cfg.target(), cfg.init_state());
    EXPECT_TRUE(r.ok()) << r.describe();
    EXPECT_EQ(cfg.subsystems.size(), 12u);
}

TEST(BuildHlm, SingleSubsystem) {
    const auto target = expand_cells({{5, 1}});
    const std::vector<SubsystemSpec> specs{spec(0, {{1, 1}}, {{5, 1}})};
    const Hlm h = build_hlm(specs, at(1, 1), target);
    EXPECT_EQ(h.num_states(), 3u);
    EXPECT_EQ(h.init_state, 0);
    EXPECT_EQ(h.succ[0], h.goal_state);
    EXPECT_TRUE(h.reaches_target[0]);
    EXPECT_EQ(h.available[0], (std::vector<SubsystemId>{0}));
    EXPECT_TRUE(h.classes[static_cast<std::size_t>(h.fail_state)].empty());
}

TEST(BuildHlm, SharedEntrySetsShareClass) {
    const auto target = expand_cells({{5, 1}});
    const std::vector<SubsystemSpec> specs{spec(0, {{1, 1}}, {{5, 1}}), spec(1, {{1, 1}}, {{5, 1}})};
    const Hlm h = build_hlm(specs, at(1, 1), target);
    EXPECT_EQ(h.num_states(), 3u);
    EXPECT_EQ(h.available[static_cast<std::size_t>(h.init_state)], (std::vector<SubsystemId>{0, 1}));
}

TEST(BuildHlm, RejectsNonComposable) {
    const auto target = expand_cells({{5, 1}});
    const std::vector<SubsystemSpec> specs{spec(0, {{1, 1}}, {{3, 1}, {3, 2}}), spec(1, {{3, 1}}, {{5, 1}})};
    EXPECT_THROW(build_hlm(specs, at(1, 1), target), NotComposable);
    const std::vector<SubsystemSpec> sparse{spec(0, {{1, 1}}, {{3, 1}}), spec(2, {{3, 1}}, {{5, 1}})};
    EXPECT_THROW(build_hlm(sparse, at(1, 1), target), NotComposable);
}

TEST(BuildHlm, LabyrinthStructure) {
    const auto cfg = testing_helpers::labyrinth_config();
    const Hlm h = build_hlm(cfg.subsystems, cfg.init_state(), cfg.target());
    // Ten entry classes plus goal and fail.
    EXPECT_EQ(h.num_states(), 12u);
    auto avail = [&](AbstractIndex s) { return h.available[static_cast<std::size_t>(s)]; };
    using V = std::vector<SubsystemId>;
    EXPECT_EQ(avail(h.init_state), (V{0, 1}));
    EXPECT_EQ(avail(h.succ[0]), (V{4}));
    EXPECT_EQ(avail(h.succ[1]), (V{2, 3}));
    EXPECT_EQ(avail(h.succ[2]), (V{6}));
    EXPECT_EQ(avail(h.succ[3]), (V{8}));
    EXPECT_EQ(avail(h.succ[4]), (V{5}));
    EXPECT_EQ(avail(h.succ[5]), (V{9}));
    EXPECT_EQ(avail(h.succ[6]), (V{7}));
    EXPECT_EQ(h.succ[7], h.succ[2]);
    EXPECT_EQ(avail(h.succ[8]), (V{10}));
    EXPECT_EQ(avail(h.succ[10]), (V{11}));
    EXPECT_EQ(h.succ[9], h.goal_state);
    EXPECT_EQ(h.succ[11], h.goal_state);
}

TEST(AbstractOf, Lookup) {
    const auto cfg = testing_helpers::labyrinth_config();
    const Hlm h = build_hlm(cfg.subsystems, cfg.init_state(), cfg.target());
    EXPECT_EQ(abstract_of(h, cfg.init_state()), h.init_state);
    EXPECT_EQ(abstract_of(h, at(2, 17, Orientation::S)), h.goal_state);
    EXPECT_EQ(abstract_of(h, at(7, 2)), h.fail_state);
    EXPECT_EQ(abstract_of(h, {3, 7, Orientation::S, Status::LavaDead}), h.fail_state);
    // The door between the two top-room subsystems.
    EXPECT_EQ(abstract_of(h, at(5, 2, Orientation::N)), h.succ[1]);
}

TEST(BuildHlm, PermutedSpecsGiveSameModel) {
    const auto cfg = testing_helpers::labyrinth_config();
    auto specs = cfg.subsystems;
    const Hlm a = build_hlm(specs, cfg.init_state(), cfg.target());
    std::reverse(specs.begin(), specs.end());
    const Hlm b = build_hlm(specs, cfg.init_state(), cfg.target());
    EXPECT_EQ(a.classes, b.classes);
    EXPECT_EQ(a.succ, b.succ);
    EXPECT_EQ(a.available, b.available);
    EXPECT_EQ(a.init_state, b.init_state);
}

TEST(ParamVector, Validate) {
    EXPECT_NO_THROW(ParamVector({0.0, 1.0}).validate(2));
    EXPECT_THROW(ParamVector({0.5}).validate(2), std::invalid_argument);
    EXPECT_THROW(ParamVector({1.5, 0.0}).validate(2), std::invalid_argument);
    EXPECT_THROW(ParamVector({-0.1, 0.0}).validate(2), std::invalid_argument);
}
