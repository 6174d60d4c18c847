#include <gtest/gtest.h>

#include "helpers.hpp"
#include "icrl/hlm_plan.hpp"

using namespace icrl;
using testing_helpers::chain_hlm;
using testing_helpers::make_hlm;

namespace {

Hlm labyrinth_hlm() {
    const auto cfg = testing_helpers::labyrinth_config();
    return build_hlm(cfg.subsystems, cfg.init_state(), cfg.target());
}

}  // namespace

TEST(MaxReachability, SingleSubsystem) {
    const Hlm h = chain_hlm(1);
    const auto v = max_reachability(h, ParamVector({0.9}));
    EXPECT_NEAR(v[0], 0.9, 1e-12);
    EXPECT_EQ(v[static_cast<std::size_t>(h.goal_state)], 1.0);
    EXPECT_EQ(v[static_cast<std::size_t>(h.fail_state)], 0.0);
}

TEST(MaxReachability, ChainProduct) {
    const auto v = max_reachability(chain_hlm(2), ParamVector({0.9, 0.8}));
    EXPECT_NEAR(v[0], 0.72, 1e-12);
}

TEST(MaxReachability, AcyclicSweepCount) {
    const Hlm h = chain_hlm(5);
    const auto v = max_reachability(h, ParamVector::filled(5, 0.9));
    EXPECT_LE(v.sweeps, static_cast<long>(h.num_states()));
}

TEST(MaxReachability, CycleWithUnitProbabilities) {
    // init -c0-> s1, s1 -c1-> init, s1 -c2-> goal: the p=1 loop must not inflate values.
    const Hlm h = make_hlm(2, {{0, 1}, {1, 0}, {1, -1}});
    const auto v = max_reachability(h, ParamVector({1.0, 1.0, 0.0}));
    EXPECT_EQ(v[0], 0.0);
    EXPECT_EQ(v[1], 0.0);
    const auto w = max_reachability(h, ParamVector({1.0, 1.0, 0.5}));
    EXPECT_NEAR(w[0], 0.5, 1e-12);
}

TEST(MaxReachability, LabyrinthLeftRoute) {
    const Hlm h = labyrinth_hlm();
    ParamVector p = ParamVector::filled(12, 0.0);
    for (int c : {0, 4, 5, 9}) p[static_cast<std::size_t>(c)] = 1.0;
    EXPECT_NEAR(max_reachability(h, p)[static_cast<std::size_t>(h.init_state)], 1.0, 1e-12);
}

TEST(MaxReachability, RejectsInvalidParameters) {
    EXPECT_THROW(max_reachability(chain_hlm(2), ParamVector({0.9})), std::invalid_argument);
}

TEST(MaxReachability, NonConvergenceReported) {
    const Hlm h = chain_hlm(3);
    ValueIterationOptions tight;
    tight.max_sweeps = 1;
    EXPECT_THROW(max_reachability(h, ParamVector::filled(3, 0.9), tight), NonConvergence);
}

TEST(MetaPolicy, ChainChoosesOnlyOption) {
    const Hlm h = chain_hlm(3);
    const auto m = extract_meta_policy(h, ParamVector::filled(3, 0.5));
    EXPECT_EQ(m.choice[0], 0);
    EXPECT_EQ(m.choice[1], 1);
    EXPECT_EQ(m.choice[2], 2);
    EXPECT_FALSE(m.has_choice(h.goal_state));
    EXPECT_FALSE(m.has_choice(h.fail_state));
}

TEST(MetaPolicy, TiesGoToLowestId) {
    const Hlm h = make_hlm(1, {{0, -1}, {0, -1}});
    EXPECT_EQ(extract_meta_policy(h, ParamVector({0.7, 0.7})).choice[0], 0);
    EXPECT_EQ(extract_meta_policy(h, ParamVector({0.6, 0.7})).choice[0], 1);
}

TEST(MetaPolicy, TiedCycleNotSelected) {
    // c0 loops back with p=1, c1 exits with p=1: both are optimal at value 1,
    // but only c1 makes progress.
    const Hlm h = make_hlm(2, {{0, 1}, {1, 0}, {1, -1}, {0, -1}});
    const auto m = extract_meta_policy(h, ParamVector({1.0, 1.0, 1.0, 1.0}));
    const auto v = policy_reachability(h, ParamVector({1.0, 1.0, 1.0, 1.0}), m);
    EXPECT_NEAR(v[0], 1.0, 1e-9);
    EXPECT_NEAR(v[1], 1.0, 1e-9);
}

TEST(MetaPolicy, LabyrinthPrefersDominantRoute) {
    const Hlm h = labyrinth_hlm();
    ParamVector left = ParamVector::filled(12, 0.5);
    for (int c : {0, 4, 5, 9}) left[static_cast<std::size_t>(c)] = 0.99;
    EXPECT_EQ(extract_meta_policy(h, left).choice[static_cast<std::size_t>(h.init_state)], 0);
    ParamVector right = ParamVector::filled(12, 0.5);
    for (int c : {1, 3, 8, 10, 11}) right[static_cast<std::size_t>(c)] = 0.99;
    EXPECT_EQ(extract_meta_policy(h, right).choice[static_cast<std::size_t>(h.init_state)], 1);
}

TEST(Predict, Extremes) {
    const Hlm h = labyrinth_hlm();
    EXPECT_EQ(predict_task_success(h, ParamVector::filled(12, 0.0)), 0.0);
    ParamVector p = ParamVector::filled(12, 0.0);
    for (int c : {1, 3, 8, 10, 11}) p[static_cast<std::size_t>(c)] = 1.0;
    EXPECT_NEAR(predict_task_success(h, p), 1.0, 1e-12);
}

TEST(Predict, FinalEstimatesOfPublishedRun) {
    const Hlm h = labyrinth_hlm();
    const ParamVector sigma({0.953333333333333, 1, 0, 0.996666666666667, 0.88, 1, 0, 0, 1, 1, 1, 1});
    const double predicted = predict_task_success(h, sigma);
    EXPECT_NEAR(predicted, 0.996666666666667, 1e-9);
    // Within binomial noise (n=300) of the measured 0.9867.
    EXPECT_LE(std::abs(predicted - 0.9867), 3.0 * std::sqrt(0.0133 * 0.9867 / 300.0));
}

TEST(Lift, MapsThroughClasses) {
    const auto cfg = testing_helpers::labyrinth_config();
    const Hlm h = build_hlm(cfg.subsystems, cfg.init_state(), cfg.target());
    ParamVector p = ParamVector::filled(12, 0.0);
    for (int c : {1, 3, 8, 10, 11}) p[static_cast<std::size_t>(c)] = 0.99;
    const auto m = extract_meta_policy(h, p);
    EXPECT_EQ(lift(m, h, cfg.init_state()), 1);
    EXPECT_EQ(lift(m, h, {5, 2, Orientation::W, Status::Alive}), 3);
    EXPECT_THROW(lift(m, h, {2, 17, Orientation::S, Status::Alive}), NoSubsystemAvailable);
    EXPECT_THROW(lift(m, h, {7, 2, Orientation::S, Status::Alive}), NoSubsystemAvailable);
}
