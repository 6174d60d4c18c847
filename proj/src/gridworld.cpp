#include "icrl/gridworld.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include <fmt/format.h>

namespace icrl {

namespace {

Orientation rotate(Orientation o, int delta) {
    return static_cast<Orientation>((static_cast<int>(o) + delta + 4) % 4);
}

CellPos ahead(CellPos c, Orientation o) {
    switch (o) {
        case Orientation::N: return {c.x, c.y - 1};
        case Orientation::E: return {c.x + 1, c.y};
        case Orientation::S: return {c.x, c.y + 1};
        case Orientation::W: return {c.x - 1, c.y};
    }
    return c;
}

std::string_view rstrip(std::string_view line) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
        line.remove_suffix(1);
    }
    return line;
}

}  // namespace

std::string to_string(Orientation o) {
    static constexpr std::array<const char*, 4> names{"N", "E", "S", "W"};
    return names[static_cast<std::size_t>(o)];
}

std::string to_string(Action a) {
    static constexpr std::array<const char*, 3> names{"TurnLeft", "TurnRight", "Forward"};
    return names[static_cast<std::size_t>(a)];
}

std::string to_string(const EnvState& s) {
    if (!s.alive()) return fmt::format("LavaDead({},{})", s.x, s.y);
    return fmt::format("({},{},{})", s.x, s.y, to_string(s.orientation));
}

MapParseError::MapParseError(Kind kind, int row, int column, const std::string& what)
    : Error(what), kind_(kind), row_(row), column_(column) {}

LabyrinthMap::LabyrinthMap(int width, int height, std::vector<Cell> cells, CellPos start, std::set<CellPos> goals)
    : width_(width), height_(height), cells_(std::move(cells)), start_(start), goals_(std::move(goals)) {
    if (width_ <= 0 || height_ <= 0 || cells_.size() != static_cast<std::size_t>(width_ * height_)) {
        throw std::invalid_argument("LabyrinthMap: cell count does not match dimensions");
    }
}

std::vector<CellPos> LabyrinthMap::free_cells() const {
    std::vector<CellPos> out;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (at({x, y}) == Cell::Empty) out.push_back({x, y});
        }
    }
    return out;
}

LabyrinthMap parse_map(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        lines.push_back(rstrip(text.substr(pos, nl - pos)));
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) {
        throw MapParseError(MapParseError::Kind::Empty, 0, 0, "map text is empty");
    }

    const int height = static_cast<int>(lines.size());
    const int width = static_cast<int>(lines.front().size());
    std::vector<Cell> cells(static_cast<std::size_t>(width * height), Cell::Empty);
    std::set<CellPos> goals;
    std::optional<CellPos> start;

    for (int y = 0; y < height; ++y) {
        const auto line = lines[static_cast<std::size_t>(y)];
        if (static_cast<int>(line.size()) != width) {
            throw MapParseError(MapParseError::Kind::RaggedRows, y, static_cast<int>(line.size()),
                                fmt::format("row {} has length {}, expected {}", y, line.size(), width));
        }
        for (int x = 0; x < width; ++x) {
            Cell cell = Cell::Empty;
            switch (line[static_cast<std::size_t>(x)]) {
                case '#': cell = Cell::Wall; break;
                case '.': break;
                case 'L': cell = Cell::Lava; break;
                case 'G': goals.insert({x, y}); break;
                case 'S':
                    if (start) {
                        throw MapParseError(MapParseError::Kind::MultipleStart, y, x,
                                            fmt::format("second start cell at row {}, column {}", y, x));
                    }
                    start = CellPos{x, y};
                    break;
                default:
                    throw MapParseError(MapParseError::Kind::IllegalCharacter, y, x,
                                        fmt::format("illegal character '{}' at row {}, column {}",
                                                    line[static_cast<std::size_t>(x)], y, x));
            }
            cells[static_cast<std::size_t>(y * width + x)] = cell;
        }
    }

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const bool border = y == 0 || x == 0 || y == height - 1 || x == width - 1;
            if (border && cells[static_cast<std::size_t>(y * width + x)] != Cell::Wall) {
                throw MapParseError(MapParseError::Kind::NonWallBorder, y, x,
                                    fmt::format("border cell at row {}, column {} is not a wall", y, x));
            }
        }
    }
    if (!start) {
        throw MapParseError(MapParseError::Kind::MissingStart, -1, -1, "map has no start cell 'S'");
    }
    return LabyrinthMap(width, height, std::move(cells), *start, std::move(goals));
}

std::string render_map(const LabyrinthMap& map) {
    std::string out;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const CellPos c{x, y};
            char ch = '.';
            if (map.at(c) == Cell::Wall) ch = '#';
            else if (map.at(c) == Cell::Lava) ch = 'L';
            else if (c == map.start_cell()) ch = 'S';
            else if (map.goal_cells().contains(c)) ch = 'G';
            out.push_back(ch);
        }
        out.push_back('\n');
    }
    return out;
}

EnvState apply_action(const LabyrinthMap& map, const EnvState& s, Action a) {
    if (!s.alive()) throw DeadStateStep();
    EnvState next = s;
    switch (a) {
        case Action::TurnLeft: next.orientation = rotate(s.orientation, -1); break;
        case Action::TurnRight: next.orientation = rotate(s.orientation, +1); break;
        case Action::Forward: {
            const CellPos target = ahead(s.cell(), s.orientation);
            if (!map.in_bounds(target) || map.at(target) == Cell::Wall) break;
            next.x = target.x;
            next.y = target.y;
            if (map.at(target) == Cell::Lava) next.status = Status::LavaDead;
            break;
        }
    }
    return next;
}

std::vector<Outcome> transition_distribution(const LabyrinthMap& map, const EnvState& s, Action a, double slip) {
    if (!s.alive()) throw DeadStateStep();
    if (!(slip >= 0.0 && slip <= 1.0)) throw std::invalid_argument("slip must lie in [0, 1]");

    std::vector<Outcome> out;
    out.reserve(kNumActions);
    for (Action effect : kActions) {
        const double mass = effect == a ? 1.0 - slip : slip / 2.0;
        if (mass <= 0.0) continue;
        const EnvState next = apply_action(map, s, effect);
        auto it = std::find_if(out.begin(), out.end(), [&](const Outcome& o) { return o.state == next; });
        if (it != out.end()) it->probability += mass;
        else out.push_back({next, mass});
    }
    return out;
}

EnvState step(const LabyrinthMap& map, const EnvState& s, Action a, double slip, Rng& rng) {
    const auto dist = transition_distribution(map, s, a, slip);
    const double u = uniform01(rng);
    double acc = 0.0;
    for (const auto& o : dist) {
        acc += o.probability;
        if (u < acc) return o.state;
    }
    return dist.back().state;
}

Gridworld::Gridworld(LabyrinthMap map, double slip) : map_(std::move(map)), slip_(slip) {
    if (!(slip_ >= 0.0 && slip_ <= 1.0)) throw std::invalid_argument("slip must lie in [0, 1]");
    cell_base_.assign(static_cast<std::size_t>(map_.width() * map_.height()), -1);
    for (CellPos c : map_.free_cells()) {
        cell_base_[static_cast<std::size_t>(c.y * map_.width() + c.x)] = static_cast<int>(states_.size());
        for (int o = 0; o < 4; ++o) states_.push_back({c.x, c.y, static_cast<Orientation>(o), Status::Alive});
    }

    offsets_.reserve(states_.size() * kNumActions + 1);
    offsets_.push_back(0);
    for (const EnvState& s : states_) {
        for (Action a : kActions) {
            for (const Outcome& o : transition_distribution(map_, s, a, slip_)) {
                outcomes_.push_back({index_of(o.state), o.probability});
            }
            offsets_.push_back(static_cast<std::uint32_t>(outcomes_.size()));
        }
    }
}

StateIndex Gridworld::index_of(const EnvState& s) const {
    if (!s.alive()) return dead_index();
    const CellPos c = s.cell();
    if (!map_.in_bounds(c)) throw std::out_of_range("state outside the map: " + to_string(s));
    const int base = cell_base_[static_cast<std::size_t>(c.y * map_.width() + c.x)];
    if (base < 0) throw std::out_of_range("state on a wall or lava cell: " + to_string(s));
    return static_cast<StateIndex>(base + static_cast<int>(s.orientation));
}

EnvState Gridworld::state_at(StateIndex i) const {
    if (i == dead_index()) return {-1, -1, Orientation::N, Status::LavaDead};
    return states_.at(i);
}

std::span<const IndexedOutcome> Gridworld::successors(StateIndex s, Action a) const {
    if (s >= dead_index()) throw DeadStateStep();
    const std::size_t k = s * kNumActions + static_cast<std::size_t>(a);
    return {outcomes_.data() + offsets_[k], outcomes_.data() + offsets_[k + 1]};
}

StateIndex Gridworld::sample(StateIndex s, Action a, Rng& rng) const {
    const auto outs = successors(s, a);
    const double u = uniform01(rng);
    double acc = 0.0;
    for (const auto& o : outs) {
        acc += o.probability;
        if (u < acc) return o.next;
    }
    return outs.back().next;
}

std::vector<bool> Gridworld::mask_of(const StateSet& states) const {
    std::vector<bool> mask(num_states(), false);
    for (const EnvState& s : states) mask[index_of(s)] = true;
    return mask;
}

StateSet expand_cells(const std::vector<CellPos>& cells) {
    StateSet out;
    for (CellPos c : cells) {
        for (int o = 0; o < 4; ++o) out.insert({c.x, c.y, static_cast<Orientation>(o), Status::Alive});
    }
    return out;
}

}  // namespace icrl
