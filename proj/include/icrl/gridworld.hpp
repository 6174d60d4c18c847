#pragma once

// Discrete labyrinth environment: MiniGrid-style position + heading, three
// actions, symmetric slip and absorbing lava.

#include <array>
#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icrl/errors.hpp"
#include "icrl/random.hpp"

namespace icrl {

enum class Cell : std::uint8_t { Empty, Wall, Lava };

struct CellPos {
    int x = 0;  // column
    int y = 0;  // row, 0 is the top line of the map text
    auto operator<=>(const CellPos&) const = default;
};

/// Headings in clockwise order; TurnRight adds one, TurnLeft subtracts one.
enum class Orientation : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };

enum class Action : std::uint8_t { TurnLeft = 0, TurnRight = 1, Forward = 2 };
inline constexpr std::array<Action, 3> kActions{Action::TurnLeft, Action::TurnRight, Action::Forward};
inline constexpr std::size_t kNumActions = kActions.size();

enum class Status : std::uint8_t { Alive, LavaDead };

struct EnvState {
    int x = 0;
    int y = 0;
    Orientation orientation = Orientation::N;
    Status status = Status::Alive;
    auto operator<=>(const EnvState&) const = default;

    [[nodiscard]] CellPos cell() const { return {x, y}; }
    [[nodiscard]] bool alive() const { return status == Status::Alive; }
};

using StateSet = std::set<EnvState>;

std::string to_string(Orientation o);
std::string to_string(Action a);
std::string to_string(const EnvState& s);

class MapParseError : public Error {
public:
    enum class Kind { Empty, RaggedRows, IllegalCharacter, MissingStart, MultipleStart, NonWallBorder };
    MapParseError(Kind kind, int row, int column, const std::string& what);
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int row() const { return row_; }
    [[nodiscard]] int column() const { return column_; }

private:
    Kind kind_;
    int row_;
    int column_;
};

class LabyrinthMap {
public:
    LabyrinthMap(int width, int height, std::vector<Cell> cells, CellPos start, std::set<CellPos> goals);

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] CellPos start_cell() const { return start_; }
    [[nodiscard]] const std::set<CellPos>& goal_cells() const { return goals_; }

    [[nodiscard]] bool in_bounds(CellPos c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }
    [[nodiscard]] Cell at(CellPos c) const { return cells_[static_cast<std::size_t>(c.y * width_ + c.x)]; }
    /// Neither wall nor lava: a cell an Alive agent may occupy.
    [[nodiscard]] bool is_free(CellPos c) const { return in_bounds(c) && at(c) == Cell::Empty; }
    /// Free cells in row-major order.
    [[nodiscard]] std::vector<CellPos> free_cells() const;

private:
    int width_;
    int height_;
    std::vector<Cell> cells_;
    CellPos start_;
    std::set<CellPos> goals_;
};

/// Parses the `#` wall, `.` empty, `L` lava, `S` start, `G` goal format.
/// Trailing spaces and carriage returns are ignored, as are trailing blank lines.
LabyrinthMap parse_map(std::string_view ascii_text);

/// Renders a map back to the ASCII format.
std::string render_map(const LabyrinthMap& map);

struct Outcome {
    EnvState state;
    double probability = 0.0;
};

/// Deterministic effect of one action, ignoring slip.
EnvState apply_action(const LabyrinthMap& map, const EnvState& s, Action a);

/// Exact successor law: the intended effect with probability 1 - slip, each of
/// the two other actions' effects with slip / 2. Zero-mass entries are dropped
/// and duplicate successors merged.
std::vector<Outcome> transition_distribution(const LabyrinthMap& map, const EnvState& s, Action a, double slip);

/// Samples one successor from transition_distribution.
EnvState step(const LabyrinthMap& map, const EnvState& s, Action a, double slip, Rng& rng);

using StateIndex = std::uint32_t;

struct IndexedOutcome {
    StateIndex next = 0;
    double probability = 0.0;
};

/// Dense indexed view of the environment MDP. Alive states get compact indices
/// in (row-major cell, orientation) order; every LavaDead state collapses into
/// one absorbing index at the end.
class Gridworld {
public:
    Gridworld(LabyrinthMap map, double slip);

    [[nodiscard]] const LabyrinthMap& map() const { return map_; }
    [[nodiscard]] double slip() const { return slip_; }
    [[nodiscard]] std::size_t num_states() const { return states_.size() + 1; }
    [[nodiscard]] std::size_t num_alive_states() const { return states_.size(); }
    [[nodiscard]] StateIndex dead_index() const { return static_cast<StateIndex>(states_.size()); }

    /// Throws std::out_of_range for Alive states outside the free cells.
    [[nodiscard]] StateIndex index_of(const EnvState& s) const;
    [[nodiscard]] EnvState state_at(StateIndex i) const;

    [[nodiscard]] std::span<const IndexedOutcome> successors(StateIndex s, Action a) const;
    /// Throws DeadStateStep when s is the dead index.
    StateIndex sample(StateIndex s, Action a, Rng& rng) const;

    /// Membership mask over state indices.
    [[nodiscard]] std::vector<bool> mask_of(const StateSet& states) const;

private:
    LabyrinthMap map_;
    double slip_;
    std::vector<EnvState> states_;
    std::vector<int> cell_base_;  // first index of each cell, -1 if not free
    std::vector<std::uint32_t> offsets_;
    std::vector<IndexedOutcome> outcomes_;
};

/// All four headings at each listed cell.
StateSet expand_cells(const std::vector<CellPos>& cells);

}  // namespace icrl
