#include "icrl/config.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace icrl {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    throw ConfigError(ConfigError::Kind::Validation, field, fmt::format("{}: {}", field, what));
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    const std::string field = path.empty() ? key : path + "." + key;
    if (!obj.is_object() || !obj.contains(key)) invalid(field, "missing required field");
    return obj.at(key);
}

double read_number(const json& v, const std::string& field) {
    if (!v.is_number()) invalid(field, "expected a number");
    return v.get<double>();
}

double read_probability(const json& v, const std::string& field) {
    const double x = read_number(v, field);
    if (!(x >= 0.0 && x <= 1.0)) invalid(field, "must lie in [0, 1]");
    return x;
}

std::uint64_t read_count(const json& v, const std::string& field) {
    if (!v.is_number_integer() || v.get<long long>() < 0) invalid(field, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

template <class Fn>
void optional_field(const json& obj, const std::string& key, const std::string& path, Fn fn) {
    if (obj.is_object() && obj.contains(key)) fn(obj.at(key), path.empty() ? key : path + "." + key);
}

std::vector<CellPos> read_cells(const json& v, const std::string& field, const LabyrinthMap& map) {
    if (!v.is_array() || v.empty()) invalid(field, "expected a non-empty array of [x, y] cells");
    std::vector<CellPos> cells;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& c = v[i];
        const std::string item = fmt::format("{}[{}]", field, i);
        if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer()) {
            invalid(item, "expected [x, y]");
        }
        const CellPos pos{c[0].get<int>(), c[1].get<int>()};
        if (!map.in_bounds(pos)) invalid(item, "cell lies outside the map");
        if (!map.is_free(pos)) invalid(item, "cell is a wall or lava");
        cells.push_back(pos);
    }
    return cells;
}

Orientation read_orientation(const json& v, const std::string& field) {
    if (!v.is_string()) invalid(field, "expected one of N, E, S, W");
    const auto s = v.get<std::string>();
    if (s == "N") return Orientation::N;
    if (s == "E") return Orientation::E;
    if (s == "S") return Orientation::S;
    if (s == "W") return Orientation::W;
    invalid(field, "expected one of N, E, S, W");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

ConfigError::ConfigError(Kind kind, std::string field, const std::string& what)
    : Error(what), kind_(kind), field_(std::move(field)) {}

EnvState Config::init_state() const {
    const CellPos start = map().start_cell();
    return {start.x, start.y, init_orientation, Status::Alive};
}

IcrlConfig Config::icrl_config() const {
    IcrlConfig c;
    c.delta = delta;
    c.training = training;
    c.estimation = estimation;
    c.eval_rollouts = eval_rollouts;
    c.eval_every = eval_every;
    c.seed = seed;
    return c;
}

Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir, bool require_composable) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(ConfigError::Kind::Parse, "", std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) invalid("", "top level must be an object");

    Config cfg;
    if (doc.contains("map_text")) {
        if (!doc["map_text"].is_string()) invalid("map_text", "expected a string");
        cfg.map_text = doc["map_text"].get<std::string>();
    } else if (doc.contains("map_file")) {
        if (!doc["map_file"].is_string()) invalid("map_file", "expected a string");
        std::filesystem::path file = doc["map_file"].get<std::string>();
        if (file.is_relative()) file = base_dir / file;
        std::ifstream in(file, std::ios::binary);
        if (!in) invalid("map_file", "cannot open " + file.string());
        std::ostringstream text;
        text << in.rdbuf();
        cfg.map_text = text.str();
    } else {
        invalid("map_text", "missing required field (or map_file)");
    }

    LabyrinthMap map = [&] {
        try {
            return parse_map(cfg.map_text);
        } catch (const MapParseError& e) {
            invalid("map", e.what());
        }
    }();

    cfg.slip = read_probability(require(doc, "slip", ""), "slip");
    cfg.delta = read_probability(require(doc, "delta", ""), "delta");
    optional_field(doc, "init_orientation", "", [&](const json& v, const std::string& f) { cfg.init_orientation = read_orientation(v, f); });
    optional_field(doc, "seed", "", [&](const json& v, const std::string& f) { cfg.seed = read_count(v, f); });
    optional_field(doc, "out_dir", "", [&](const json& v, const std::string& f) {
        if (!v.is_string()) invalid(f, "expected a string");
        cfg.out_dir = v.get<std::string>();
    });

    if (doc.contains("target_exit")) {
        cfg.target_cells = read_cells(doc["target_exit"], "target_exit", map);
    } else {
        cfg.target_cells.assign(map.goal_cells().begin(), map.goal_cells().end());
        if (cfg.target_cells.empty()) invalid("target_exit", "missing, and the map has no G cells");
    }

    const json& subs = require(doc, "subsystems", "");
    if (!subs.is_array() || subs.empty()) invalid("subsystems", "expected a non-empty array");
    std::vector<bool> seen(subs.size(), false);
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const std::string path = fmt::format("subsystems[{}]", i);
        const json& s = subs[i];
        SubsystemSpec spec;
        const json& id = require(s, "id", path);
        if (!id.is_number_integer()) invalid(path + ".id", "expected an integer");
        spec.id = id.get<int>();
        if (spec.id < 0 || static_cast<std::size_t>(spec.id) >= subs.size()) {
            invalid(path + ".id", fmt::format("ids must be dense 0..{}", subs.size() - 1));
        }
        if (seen[static_cast<std::size_t>(spec.id)]) invalid(path + ".id", "duplicate id");
        seen[static_cast<std::size_t>(spec.id)] = true;

        spec.entry = expand_cells(read_cells(require(s, "entry", path), path + ".entry", map));
        const json& exit = require(s, "exit", path);
        if (exit.is_string() && exit.get<std::string>() == "target") {
            spec.exit = expand_cells(cfg.target_cells);
        } else {
            spec.exit = expand_cells(read_cells(exit, path + ".exit", map));
        }
        optional_field(s, "horizon", path, [&](const json& v, const std::string& f) {
            if (!v.is_number_integer() || v.get<long long>() <= 0) invalid(f, "expected a positive integer");
            spec.horizon = v.get<int>();
        });
        cfg.subsystems.push_back(std::move(spec));
    }

    optional_field(doc, "training", "", [&](const json& t, const std::string& path) {
        auto& tr = cfg.training;
        optional_field(t, "n_train", path, [&](const json& v, const std::string& f) { tr.n_train = read_count(v, f); });
        optional_field(t, "n_max", path, [&](const json& v, const std::string& f) { tr.n_max = read_count(v, f); });
        optional_field(t, "alpha", path, [&](const json& v, const std::string& f) { tr.alpha = read_number(v, f); });
        optional_field(t, "gamma", path, [&](const json& v, const std::string& f) { tr.gamma = read_number(v, f); });
        optional_field(t, "epsilon_start", path, [&](const json& v, const std::string& f) { tr.epsilon_start = read_probability(v, f); });
        optional_field(t, "epsilon_end", path, [&](const json& v, const std::string& f) { tr.epsilon_end = read_probability(v, f); });
        if (tr.n_train == 0) invalid(path + ".n_train", "must be positive");
        try {
            tr.validate();
        } catch (const std::invalid_argument& e) {
            invalid(path, e.what());
        }
    });

    optional_field(doc, "estimation", "", [&](const json& e, const std::string& path) {
        auto& es = cfg.estimation;
        optional_field(e, "n_rollouts", path, [&](const json& v, const std::string& f) {
            es.n_rollouts = read_count(v, f);
            if (es.n_rollouts == 0) invalid(f, "must be positive");
        });
        optional_field(e, "beta", path, [&](const json& v, const std::string& f) {
            es.beta = read_number(v, f);
            if (!(es.beta > 0.0 && es.beta < 1.0)) invalid(f, "must lie in (0, 1)");
        });
        optional_field(e, "strict_min_mode", path, [&](const json& v, const std::string& f) {
            if (!v.is_boolean()) invalid(f, "expected true or false");
            es.strict_min_mode = v.get<bool>();
        });
    });

    optional_field(doc, "evaluation", "", [&](const json& e, const std::string& path) {
        optional_field(e, "n_rollouts", path, [&](const json& v, const std::string& f) { cfg.eval_rollouts = read_count(v, f); });
        optional_field(e, "every", path, [&](const json& v, const std::string& f) {
            if (!v.is_number_integer() || v.get<long long>() < 0) invalid(f, "expected a non-negative integer");
            cfg.eval_every = v.get<int>();
        });
    });

    if (require_composable) {
        const auto report = check_composable(cfg.subsystems, cfg.target(), cfg.init_state());
        if (!report.ok()) throw NotComposable(report.describe());
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path, bool require_composable) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(ConfigError::Kind::Parse, "", "cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path(), require_composable);
}

int run_experiment(const Config& config, std::ostream& progress) {
    const Gridworld world(config.map(), config.slip);
    std::filesystem::create_directories(config.out_dir / "final_policies");

    std::ofstream csv(config.out_dir / "run_log.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write run_log.csv");
    bool header_written = false;
    auto on_row = [&](const RunLog& log, const RunLogRow& row) {
        if (!header_written) {
            csv << log.csv_header() << '\n';
            header_written = true;
        }
        csv << log.csv_row(row) << '\n';
        csv.flush();
        if (!row.feasible) {
            progress << fmt::format("iter {:3d}  steps {:8d}  decomposition infeasible\n", row.iteration, row.total_steps);
            return;
        }
        progress << fmt::format("iter {:3d}  steps {:8d}  trained c{:<2d}  predicted {:.4f}  empirical {}\n",
                                row.iteration, row.total_steps, row.trained, row.predicted,
                                row.empirical ? fmt::format("{:.4f}", *row.empirical) : std::string("-"));
    };

    const IcrlResult result = icrl_run(world, config.subsystems, config.init_state(), config.target(),
                                       config.icrl_config(), q_learning_factory(), on_row);
    if (!header_written) csv << result.log.csv_header() << '\n';
    csv.close();

    for (const auto& sub : result.subsystems) {
        std::ofstream out(config.out_dir / "final_policies" / fmt::format("subsystem_{}.qtable", sub.spec.id),
                          std::ios::binary);
        sub.trainer->save(out);
    }

    const bool satisfied = result.termination == Termination::Satisfied;
    json summary;
    summary["terminated"] = satisfied ? "satisfied" : "infeasible";
    summary["iterations"] = result.iterations;
    summary["total_steps"] = result.total_steps();
    summary["final_predicted_success"] = result.predicted;
    summary["final_empirical_success"] = result.final_empirical ? json(*result.final_empirical) : json(nullptr);
    summary["seed"] = config.seed;
    json per_id = json::array();
    for (const auto& sub : result.subsystems) {
        per_id.push_back({{"id", sub.spec.id}, {"steps", sub.steps}, {"sigma_hat", sub.sigma_hat}});
    }
    summary["subsystems"] = per_id;
    json meta = json::array();
    for (std::size_t s = 0; s < result.meta.choice.size(); ++s) {
        if (result.meta.choice[s] >= 0) meta.push_back({{"abstract_state", s}, {"subsystem", result.meta.choice[s]}});
    }
    summary["meta_policy"] = meta;
    write_text(config.out_dir / "summary.json", summary.dump(2) + "\n");

    progress << fmt::format("{}: predicted {:.4f}, empirical {}, {} steps over {} iterations\n",
                            satisfied ? "satisfied" : "infeasible", result.predicted,
                            result.final_empirical ? fmt::format("{:.4f}", *result.final_empirical) : std::string("-"),
                            result.total_steps(), result.iterations);
    return satisfied ? kExitSatisfied : kExitInfeasible;
}

int print_decomposition(const Config& config, std::ostream& out) {
    const Hlm hlm = build_hlm(config.subsystems, config.init_state(), config.target());
    const DecompositionProblem problem{&hlm, config.delta, {}, {}};
    const DecompositionResult result = solve_decomposition(problem);
    out << fmt::format("feasible: {}\n", result.feasible ? "yes" : "no");
    if (!result.feasible) return kExitInfeasible;
    std::string path;
    for (SubsystemId c : result.support_path) path += fmt::format("{}c{}", path.empty() ? "" : " -> ", c);
    out << fmt::format("support path: {}\n", path);
    out << fmt::format("objective: {:.6f}\n", result.objective);
    out << fmt::format("reachability at init: {:.6f} (required {:.6f})\n", result.certified_value, 1.0 - config.delta);
    for (std::size_t c = 0; c < result.p.size(); ++c) out << fmt::format("p_{} = {:.6f}\n", c, result.p[c]);
    return kExitSatisfied;
}

int print_composability(const Config& config, std::ostream& out) {
    const auto report = check_composable(config.subsystems, config.target(), config.init_state());
    out << report.describe() << '\n';
    if (!report.ok()) return kExitError;
    const Hlm hlm = build_hlm(config.subsystems, config.init_state(), config.target());
    out << fmt::format("HLM: {} abstract states (init {}, goal {}, fail {})\n", hlm.num_states(), hlm.init_state,
                       hlm.goal_state, hlm.fail_state);
    for (std::size_t c = 0; c < hlm.num_subsystems(); ++c) {
        out << fmt::format("succ(c{}) = {}\n", c, hlm.succ[c]);
    }
    return kExitSatisfied;
}

}  // namespace icrl
