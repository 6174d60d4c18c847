#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "icrl/config.hpp"
#include "json.hpp"

using namespace icrl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json strip_document() {
    return json{
        {"map_text", testing_helpers::kStripMap},
        {"slip", 0.1},
        {"delta", 0.3},
        {"seed", 4},
        {"subsystems",
         {{{"id", 0}, {"entry", {{1, 1}}}, {"exit", {{4, 1}}}, {"horizon", 40}},
          {{"id", 1}, {"entry", {{4, 1}}}, {"exit", {{7, 1}}}},
          {{"id", 2}, {"entry", {{7, 1}}}, {"exit", "target"}}}},
        {"training", {{"n_train", 5000}, {"n_max", 40000}}},
        {"estimation", {{"n_rollouts", 200}}},
        {"evaluation", {{"n_rollouts", 200}, {"every", 1}}},
    };
}

Config parse(const json& doc) { return parse_config(doc.dump(), "."); }

std::string field_of(const json& doc) {
    try {
        parse(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("icrl_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Config, ShippedLabyrinth) {
    const auto cfg = testing_helpers::labyrinth_config();
    EXPECT_EQ(cfg.subsystems.size(), 12u);
    EXPECT_DOUBLE_EQ(cfg.delta, 0.05);
    EXPECT_DOUBLE_EQ(cfg.slip, 0.1);
    EXPECT_EQ(cfg.training.n_train, 50'000u);
    EXPECT_EQ(cfg.training.n_max, 500'000u);
    EXPECT_EQ(cfg.estimation.n_rollouts, 300u);
    EXPECT_EQ(cfg.target().size(), 48u);
    for (const auto& s : cfg.subsystems) EXPECT_EQ(s.entry.size() % 4, 0u);
}

TEST(Config, Defaults) {
    auto doc = strip_document();
    doc.erase("training");
    doc.erase("estimation");
    doc.erase("evaluation");
    const auto cfg = parse(doc);
    EXPECT_EQ(cfg.training.n_train, 50'000u);
    EXPECT_DOUBLE_EQ(cfg.training.alpha, 0.1);
    EXPECT_EQ(cfg.subsystems[1].horizon, 100);
    EXPECT_EQ(cfg.subsystems[0].horizon, 40);
    EXPECT_EQ(cfg.init_orientation, Orientation::E);
    EXPECT_EQ(cfg.target_cells, (std::vector<CellPos>{{9, 3}}));
}

TEST(Config, MissingDelta) {
    auto doc = strip_document();
    doc.erase("delta");
    try {
        parse(doc);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.kind(), ConfigError::Kind::Validation);
        EXPECT_EQ(e.field(), "delta");
    }
}

TEST(Config, FieldPaths) {
    auto doc = strip_document();
    doc["subsystems"][1]["entry"] = json{{50, 1}};
    EXPECT_EQ(field_of(doc), "subsystems[1].entry[0]");

    doc = strip_document();
    doc["subsystems"][2]["exit"] = json{{2, 2}};  // lava
    EXPECT_EQ(field_of(doc), "subsystems[2].exit[0]");

    doc = strip_document();
    doc["slip"] = 2.0;
    EXPECT_EQ(field_of(doc), "slip");

    doc = strip_document();
    doc["subsystems"][2]["id"] = 0;
    EXPECT_EQ(field_of(doc), "subsystems[2].id");

    doc = strip_document();
    doc["training"]["alpha"] = 0.0;
    EXPECT_EQ(field_of(doc), "training");

    doc = strip_document();
    doc["map_text"] = "##\n#S#";
    EXPECT_EQ(field_of(doc), "map");
}

TEST(Config, MalformedJson) {
    try {
        parse_config("{ not json", ".");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.kind(), ConfigError::Kind::Parse);
    }
}

TEST(Config, NotComposableNamesPair) {
    auto doc = strip_document();
    doc["subsystems"][0]["exit"] = json{{4, 1}, {4, 2}};
    try {
        parse(doc);
        FAIL() << "expected NotComposable";
    } catch (const NotComposable& e) {
        EXPECT_NE(std::string(e.what()).find("subsystem 0"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("subsystem 1"), std::string::npos);
    }
    EXPECT_NO_THROW(parse_config(doc.dump(), ".", false));
}

TEST(Experiment, WritesArtifactsAndIsReproducible) {
    auto cfg = parse(strip_document());
    std::ostringstream progress;
    cfg.out_dir = scratch_dir("run_a");
    ASSERT_EQ(run_experiment(cfg, progress), kExitSatisfied);
    const fs::path first = cfg.out_dir;
    cfg.out_dir = scratch_dir("run_b");
    ASSERT_EQ(run_experiment(cfg, progress), kExitSatisfied);

    EXPECT_EQ(slurp(first / "run_log.csv"), slurp(cfg.out_dir / "run_log.csv"));
    for (int id = 0; id < 3; ++id) {
        const auto name = "subsystem_" + std::to_string(id) + ".qtable";
        EXPECT_TRUE(fs::exists(first / "final_policies" / name));
        EXPECT_EQ(slurp(first / "final_policies" / name), slurp(cfg.out_dir / "final_policies" / name));
    }

    const json summary = json::parse(slurp(first / "summary.json"));
    EXPECT_EQ(summary["terminated"], "satisfied");
    EXPECT_EQ(summary["total_steps"].get<std::uint64_t>(),
              cfg.training.n_train * summary["iterations"].get<std::uint64_t>());
    std::uint64_t per_id = 0;
    for (const auto& s : summary["subsystems"]) per_id += s["steps"].get<std::uint64_t>();
    EXPECT_EQ(per_id, summary["total_steps"].get<std::uint64_t>());
    EXPECT_GE(summary["final_predicted_success"].get<double>(), 0.7);
}

TEST(Experiment, ZeroBudgetExitsInfeasible) {
    auto doc = strip_document();
    doc["training"]["n_max"] = 0;
    auto cfg = parse(doc);
    cfg.out_dir = scratch_dir("run_zero");
    std::ostringstream progress;
    EXPECT_EQ(run_experiment(cfg, progress), kExitInfeasible);
    const json summary = json::parse(slurp(cfg.out_dir / "summary.json"));
    EXPECT_EQ(summary["terminated"], "infeasible");
    EXPECT_EQ(summary["total_steps"].get<std::uint64_t>(), 0u);
}

TEST(Experiment, DecomposeAndCheck) {
    const auto cfg = testing_helpers::labyrinth_config();
    std::ostringstream out;
    EXPECT_EQ(print_decomposition(cfg, out), kExitSatisfied);
    EXPECT_NE(out.str().find("support path: c0 -> c4 -> c5 -> c9"), std::string::npos);
    std::ostringstream report;
    EXPECT_EQ(print_composability(cfg, report), kExitSatisfied);
    EXPECT_EQ(report.str().rfind("composable", 0), 0u);
}
