#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlbrush/errors.hpp"

namespace rlbrush {

enum class Terrain : std::uint8_t { Floor, Wall, GoalPad };
enum class Occupant : std::uint8_t { None, Player, Box };

// The 5-symbol edit alphabet shared by the editor palette and the agents.
enum class PaletteTile : std::uint8_t { Empty, Wall, Player, Box, Goal };
inline constexpr int kPaletteSize = 5;

struct Cell {
    Terrain terrain = Terrain::Floor;
    Occupant occupant = Occupant::None;

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Position {
    int x = 0;
    int y = 0;

    friend bool operator==(const Position&, const Position&) = default;
    friend auto operator<=>(const Position& a, const Position& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

// Rectangular level, row-major. Immutable from the outside except through
// the value-returning operations below; set() exists for builders.
class Grid {
  public:
    Grid(int width, int height, Cell fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return cells_.size(); }

    bool in_bounds(Position p) const {
        return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
    }
    std::size_t index(Position p) const {
        return static_cast<std::size_t>(p.y) * width_ + p.x;
    }
    Position position(std::size_t index) const {
        return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
    }

    const Cell& at(Position p) const;
    const Cell& operator[](std::size_t i) const { return cells_[i]; }
    const std::vector<Cell>& cells() const { return cells_; }

    // Throws BoundsError, or FormatError when the cell breaks Wall => None.
    void set(Position p, Cell c);

    friend bool operator==(const Grid&, const Grid&) = default;

  private:
    int width_;
    int height_;
    std::vector<Cell> cells_;
};

struct DiffEntry {
    Position pos;
    Cell before;
    Cell after;

    friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

// Entries are kept sorted by position (row-major) with unique positions.
struct Diff {
    std::vector<DiffEntry> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
    friend bool operator==(const Diff&, const Diff&) = default;
};

struct ValidationReport {
    int playerCount = 0;
    int boxCount = 0;
    int goalCount = 0;
    int floorRegionCount = 0;
    bool balanced = false;
};

inline constexpr int kMinSide = 3;

Grid parse_level(std::string_view text);
std::string serialize_level(const Grid& g);

Grid apply_palette(const Grid& g, Position pos, PaletteTile t);
Diff diff_grids(const Grid& a, const Grid& b);
Grid apply_diff(const Grid& g, const Diff& d);
ValidationReport validate(const Grid& g);

// How a cell reads back through the palette; a box wins over the goal under it.
PaletteTile palette_of(const Cell& c);

std::string_view to_string(Terrain t);
std::string_view to_string(Occupant o);
std::string_view to_string(PaletteTile t);
std::optional<Terrain> terrain_from_string(std::string_view s);
std::optional<Occupant> occupant_from_string(std::string_view s);
std::optional<PaletteTile> palette_from_string(std::string_view s);

} // namespace rlbrush
