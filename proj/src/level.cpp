#include "rlbrush/level.hpp"

#include <algorithm>
#include <array>

namespace rlbrush {

namespace {

bool cell_ok(const Cell& c) {
    return c.terrain != Terrain::Wall || c.occupant == Occupant::None;
}

std::optional<Cell> cell_from_symbol(char ch) {
    switch (ch) {
    case '#': return Cell{Terrain::Wall, Occupant::None};
    case '@': return Cell{Terrain::Floor, Occupant::Player};
    case '$': return Cell{Terrain::Floor, Occupant::Box};
    case '.': return Cell{Terrain::GoalPad, Occupant::None};
    case '*': return Cell{Terrain::GoalPad, Occupant::Box};
    case '+': return Cell{Terrain::GoalPad, Occupant::Player};
    case ' ':
    case '-': return Cell{Terrain::Floor, Occupant::None};
    default: return std::nullopt;
    }
}

char symbol_of(const Cell& c) {
    switch (c.terrain) {
    case Terrain::Wall: return '#';
    case Terrain::GoalPad:
        return c.occupant == Occupant::Box ? '*' : c.occupant == Occupant::Player ? '+' : '.';
    case Terrain::Floor:
        return c.occupant == Occupant::Box ? '$' : c.occupant == Occupant::Player ? '@' : '-';
    }
    return '?';
}

} // namespace

Grid::Grid(int width, int height, Cell fill) : width_(width), height_(height) {
    if (width < kMinSide || height < kMinSide)
        throw DimensionError("grid must be at least 3x3, got " + std::to_string(width) + "x" +
                             std::to_string(height));
    if (!cell_ok(fill)) throw FormatError("wall cell cannot hold an occupant");
    cells_.assign(static_cast<std::size_t>(width) * height, fill);
}

const Cell& Grid::at(Position p) const {
    if (!in_bounds(p))
        throw BoundsError("position (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                          ") out of bounds");
    return cells_[index(p)];
}

void Grid::set(Position p, Cell c) {
    if (!in_bounds(p))
        throw BoundsError("position (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                          ") out of bounds");
    if (!cell_ok(c)) throw FormatError("wall cell cannot hold an occupant");
    cells_[index(p)] = c;
}

Grid parse_level(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    // A single trailing newline is not an extra row.
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw FormatError("empty level");

    const auto width = lines.front().size();
    for (const auto& line : lines)
        if (line.size() != width) throw FormatError("ragged level lines");

    std::vector<Cell> cells;
    cells.reserve(width * lines.size());
    for (const auto& line : lines) {
        for (char ch : line) {
            auto c = cell_from_symbol(ch);
            if (!c) throw FormatError(std::string("unknown level symbol '") + ch + "'");
            cells.push_back(*c);
        }
    }

    Grid g(static_cast<int>(width), static_cast<int>(lines.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) g.set(g.position(i), cells[i]);
    return g;
}

std::string serialize_level(const Grid& g) {
    std::string out;
    out.reserve(g.size() + g.height());
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) out.push_back(symbol_of(g.at({x, y})));
        out.push_back('\n');
    }
    return out;
}

Grid apply_palette(const Grid& g, Position pos, PaletteTile t) {
    const Cell cur = g.at(pos);
    Grid out = g;
    Cell next = cur;
    switch (t) {
    case PaletteTile::Empty: next = {Terrain::Floor, Occupant::None}; break;
    case PaletteTile::Wall: next = {Terrain::Wall, Occupant::None}; break;
    case PaletteTile::Goal:
        next = {Terrain::GoalPad, cur.terrain == Terrain::Wall ? Occupant::None : cur.occupant};
        break;
    case PaletteTile::Box:
    case PaletteTile::Player:
        next.terrain = cur.terrain == Terrain::Wall ? Terrain::Floor : cur.terrain;
        next.occupant = t == PaletteTile::Box ? Occupant::Box : Occupant::Player;
        break;
    }
    if (t == PaletteTile::Player) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i].occupant == Occupant::Player) {
                Cell c = out[i];
                c.occupant = Occupant::None;
                out.set(out.position(i), c);
            }
        }
    }
    out.set(pos, next);
    return out;
}

Diff diff_grids(const Grid& a, const Grid& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionError("cannot diff grids of different dimensions");
    Diff d;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) d.entries.push_back({a.position(i), a[i], b[i]});
    return d;
}

Grid apply_diff(const Grid& g, const Diff& d) {
    Grid out = g;
    for (const auto& e : d.entries) {
        if (!g.in_bounds(e.pos)) throw BoundsError("diff entry out of bounds");
        if (g.at(e.pos) != e.before)
            throw StaleDiffError("level changed at (" + std::to_string(e.pos.x) + "," +
                                 std::to_string(e.pos.y) + ") since the diff was computed");
        out.set(e.pos, e.after);
    }
    return out;
}

ValidationReport validate(const Grid& g) {
    ValidationReport r;
    for (const auto& c : g.cells()) {
        if (c.occupant == Occupant::Player) ++r.playerCount;
        if (c.occupant == Occupant::Box) ++r.boxCount;
        if (c.terrain == Terrain::GoalPad) ++r.goalCount;
    }
    r.balanced = r.boxCount == r.goalCount;

    // 4-connected components of non-wall cells
    std::vector<std::uint8_t> seen(g.size(), 0);
    std::vector<std::size_t> stack;
    const int w = g.width();
    const int h = g.height();
    for (std::size_t start = 0; start < g.size(); ++start) {
        if (seen[start] || g[start].terrain == Terrain::Wall) continue;
        ++r.floorRegionCount;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const auto i = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(i % w);
            const int y = static_cast<int>(i / w);
            const std::array<std::pair<int, int>, 4> nbrs{{{x, y - 1}, {x, y + 1}, {x - 1, y}, {x + 1, y}}};
            for (auto [nx, ny] : nbrs) {
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const auto j = static_cast<std::size_t>(ny) * w + nx;
                if (seen[j] || g[j].terrain == Terrain::Wall) continue;
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return r;
}

PaletteTile palette_of(const Cell& c) {
    if (c.terrain == Terrain::Wall) return PaletteTile::Wall;
    if (c.occupant == Occupant::Player) return PaletteTile::Player;
    if (c.occupant == Occupant::Box) return PaletteTile::Box;
    if (c.terrain == Terrain::GoalPad) return PaletteTile::Goal;
    return PaletteTile::Empty;
}

std::string_view to_string(Terrain t) {
    switch (t) {
    case Terrain::Floor: return "Floor";
    case Terrain::Wall: return "Wall";
    case Terrain::GoalPad: return "GoalPad";
    }
    return "?";
}

std::string_view to_string(Occupant o) {
    switch (o) {
    case Occupant::None: return "None";
    case Occupant::Player: return "Player";
    case Occupant::Box: return "Box";
    }
    return "?";
}

std::string_view to_string(PaletteTile t) {
    switch (t) {
    case PaletteTile::Empty: return "Empty";
    case PaletteTile::Wall: return "Wall";
    case PaletteTile::Player: return "Player";
    case PaletteTile::Box: return "Box";
    case PaletteTile::Goal: return "Goal";
    }
    return "?";
}

std::optional<Terrain> terrain_from_string(std::string_view s) {
    for (auto t : {Terrain::Floor, Terrain::Wall, Terrain::GoalPad})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

std::optional<Occupant> occupant_from_string(std::string_view s) {
    for (auto o : {Occupant::None, Occupant::Player, Occupant::Box})
        if (to_string(o) == s) return o;
    return std::nullopt;
}

std::optional<PaletteTile> palette_from_string(std::string_view s) {
    for (auto t : {PaletteTile::Empty, PaletteTile::Wall, PaletteTile::Player, PaletteTile::Box,
                   PaletteTile::Goal})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

} // namespace rlbrush
