#include "rlbrush/solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <string>
#include <unordered_set>

namespace rlbrush {

Position step(Position p, Direction d) {
    switch (d) {
    case Direction::Up: return {p.x, p.y - 1};
    case Direction::Down: return {p.x, p.y + 1};
    case Direction::Left: return {p.x - 1, p.y};
    case Direction::Right: return {p.x + 1, p.y};
    }
    return p;
}

char direction_letter(Direction d) {
    switch (d) {
    case Direction::Up: return 'u';
    case Direction::Down: return 'd';
    case Direction::Left: return 'l';
    case Direction::Right: return 'r';
    }
    return '?';
}

std::string_view to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Solved: return "Solved";
    case SolveStatus::Unsolvable: return "Unsolvable";
    case SolveStatus::Invalid: return "Invalid";
    case SolveStatus::BudgetExceeded: return "BudgetExceeded";
    }
    return "?";
}

GameState initial_state(const Grid& g) {
    GameState s;
    int players = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].occupant == Occupant::Player) {
            s.player = g.position(i);
            ++players;
        } else if (g[i].occupant == Occupant::Box) {
            s.boxes.push_back(g.position(i));
        }
    }
    if (players != 1) throw FormatError("level needs exactly one player");
    return s;
}

namespace {

bool walkable(const Grid& g, Position p) {
    return g.in_bounds(p) && g.at(p).terrain != Terrain::Wall;
}

bool has_box(const std::vector<Position>& boxes, Position p) {
    return std::binary_search(boxes.begin(), boxes.end(), p);
}

// Index-based state for the search loop. Keys pack the player cell and the
// sorted box cells as 16-bit values.
struct Board {
    int width;
    int height;
    std::vector<std::uint8_t> wall;
    std::vector<std::uint8_t> goal;

    explicit Board(const Grid& g) : width(g.width()), height(g.height()) {
        wall.resize(g.size());
        goal.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            wall[i] = g[i].terrain == Terrain::Wall;
            goal[i] = g[i].terrain == Terrain::GoalPad;
        }
    }

    // -1 when the move leaves the grid or hits a wall.
    int neighbour(int cell, Direction d) const {
        int x = cell % width;
        int y = cell / width;
        switch (d) {
        case Direction::Up: --y; break;
        case Direction::Down: ++y; break;
        case Direction::Left: --x; break;
        case Direction::Right: ++x; break;
        }
        if (x < 0 || y < 0 || x >= width || y >= height) return -1;
        const int n = y * width + x;
        return wall[n] ? -1 : n;
    }
};

using Key = std::u16string;

struct Node {
    Key key;
    std::uint32_t parent;
    Direction dir;
};

bool key_won(const Board& b, const Key& k) {
    if (k.size() < 2) return false;
    for (std::size_t i = 1; i < k.size(); ++i)
        if (!b.goal[k[i]]) return false;
    return true;
}


// Levels of up to 64 cells: boxes as a bitmask, visited states in an
// open-addressing table. Same expansion order as the general path.
struct SmallNode {
    std::uint64_t boxes;
    std::uint32_t parent;
    std::uint8_t player;
    Direction dir;
};

class StateSet {
  public:
    StateSet() : slots_(1024, Slot{0, 0}) {}

    // False if already present.
    bool insert(std::uint64_t boxes, std::uint8_t player) {
        if ((count_ + 1) * 2 > slots_.size()) grow();
        return place(slots_, boxes, static_cast<std::uint32_t>(player) + 1);
    }
    std::size_t size() const { return count_; }

  private:
    struct Slot {
        std::uint64_t boxes;
        std::uint32_t tag; // player + 1; 0 marks an empty slot
    };

    // Fibonacci hashing: the top bits of the product index the table.
    static std::size_t hash(std::uint64_t boxes, std::uint32_t tag, int bits) {
        std::uint64_t h = (boxes ^ (static_cast<std::uint64_t>(tag) << 57) ^ (boxes >> 31)) *
                          0x9E3779B97F4A7C15ull;
        return static_cast<std::size_t>(h >> (64 - bits));
    }

    bool place(std::vector<Slot>& slots, std::uint64_t boxes, std::uint32_t tag) {
        const std::size_t mask = slots.size() - 1;
        const int bits = std::countr_zero(slots.size());
        for (std::size_t i = hash(boxes, tag, bits);; i = (i + 1) & mask) {
            if (slots[i].tag == 0) {
                slots[i] = {boxes, tag};
                ++count_;
                return true;
            }
            if (slots[i].tag == tag && slots[i].boxes == boxes) return false;
        }
    }

    void grow() {
        std::vector<Slot> bigger(slots_.size() * 2, Slot{0, 0});
        count_ = 0;
        for (const auto& s : slots_)
            if (s.tag != 0) place(bigger, s.boxes, s.tag);
        slots_.swap(bigger);
    }

    std::vector<Slot> slots_;
    std::size_t count_ = 0;
};

SolveResult solve_small(const Grid& g, const SolveLimits& limits) {
    SolveResult result;
    const Board board(g);
    const int n = static_cast<int>(g.size());
    std::vector<std::array<int, 4>> nbr(n);
    std::uint64_t goals = 0;
    std::uint64_t boxes = 0;
    std::uint8_t player = 0;
    for (int i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < 4; ++d) nbr[i][d] = board.neighbour(i, kDirections[d]);
        if (board.goal[i]) goals |= 1ull << i;
        if (g[i].occupant == Occupant::Box) boxes |= 1ull << i;
        if (g[i].occupant == Occupant::Player) player = static_cast<std::uint8_t>(i);
    }
    auto won = [goals](std::uint64_t b) { return b != 0 && (b & ~goals) == 0; };

    std::vector<SmallNode> nodes;
    StateSet visited;
    nodes.push_back({boxes, 0, player, Direction::Up});
    visited.insert(boxes, player);

    auto build = [&](std::uint32_t idx) {
        Solution sol;
        while (idx != 0) {
            sol.moves.push_back(nodes[idx].dir);
            idx = nodes[idx].parent;
        }
        std::reverse(sol.moves.begin(), sol.moves.end());
        return sol;
    };

    if (won(boxes)) {
        result.status = SolveStatus::Solved;
        result.solution = Solution{};
        result.statesVisited = 1;
        return result;
    }

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        if ((head & 4095) == 0 && head != 0) {
            const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
            if (elapsed > limits.maxMillis) {
                result.status = SolveStatus::BudgetExceeded;
                result.statesVisited = visited.size();
                return result;
            }
        }
        const SmallNode cur = nodes[head];
        for (std::size_t d = 0; d < 4; ++d) {
            const int target = nbr[cur.player][d];
            if (target < 0) continue;
            std::uint64_t next = cur.boxes;
            if ((next >> target) & 1u) {
                const int beyond = nbr[target][d];
                if (beyond < 0 || ((next >> beyond) & 1u)) continue;
                next ^= (1ull << target) | (1ull << beyond);
            }
            if (!visited.insert(next, static_cast<std::uint8_t>(target))) continue;
            if (visited.size() > limits.maxStates) {
                result.status = SolveStatus::BudgetExceeded;
                result.statesVisited = visited.size();
                return result;
            }
            nodes.push_back({next, static_cast<std::uint32_t>(head), static_cast<std::uint8_t>(target),
                             kDirections[d]});
            if (won(next)) {
                result.status = SolveStatus::Solved;
                result.solution = build(static_cast<std::uint32_t>(nodes.size() - 1));
                result.statesVisited = visited.size();
                return result;
            }
        }
    }
    result.status = SolveStatus::Unsolvable;
    result.statesVisited = visited.size();
    return result;
}

} // namespace

std::optional<GameState> step_game(const Grid& g, const GameState& s, Direction dir) {
    const Position target = step(s.player, dir);
    if (!walkable(g, target)) return std::nullopt;
    GameState next = s;
    if (has_box(s.boxes, target)) {
        const Position beyond = step(target, dir);
        if (!walkable(g, beyond) || has_box(s.boxes, beyond)) return std::nullopt;
        auto it = std::lower_bound(next.boxes.begin(), next.boxes.end(), target);
        *it = beyond;
        std::sort(next.boxes.begin(), next.boxes.end());
    }
    next.player = target;
    return next;
}

bool is_won(const Grid& g, const GameState& s) {
    if (s.boxes.empty()) return false;
    return std::all_of(s.boxes.begin(), s.boxes.end(),
                       [&](Position p) { return g.at(p).terrain == Terrain::GoalPad; });
}

SolveResult solve_bfs(const Grid& g, const SolveLimits& limits) {
    SolveResult result;
    const auto report = validate(g);
    if (report.playerCount != 1 || report.boxCount == 0 || !report.balanced) {
        result.status = SolveStatus::Invalid;
        return result;
    }

    if (g.size() <= 64) return solve_small(g, limits);

    const Board board(g);
    Key start;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i].occupant == Occupant::Player) start.push_back(static_cast<char16_t>(i));
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i].occupant == Occupant::Box) start.push_back(static_cast<char16_t>(i));

    std::vector<Node> nodes;
    std::unordered_set<Key> visited;
    nodes.push_back({start, 0, Direction::Up});
    visited.insert(start);

    auto build = [&](std::uint32_t idx) {
        Solution sol;
        while (idx != 0) {
            sol.moves.push_back(nodes[idx].dir);
            idx = nodes[idx].parent;
        }
        std::reverse(sol.moves.begin(), sol.moves.end());
        return sol;
    };

    if (key_won(board, start)) {
        result.status = SolveStatus::Solved;
        result.solution = Solution{};
        result.statesVisited = 1;
        return result;
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::size_t head = 0;
    Key next;
    while (head < nodes.size()) {
        if ((head & 1023) == 0 && head != 0) {
            const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
            if (elapsed > limits.maxMillis) {
                result.status = SolveStatus::BudgetExceeded;
                result.statesVisited = visited.size();
                return result;
            }
        }
        const auto cur = static_cast<std::uint32_t>(head++);
        const Key key = nodes[cur].key;
        const int player = key[0];
        for (Direction d : kDirections) {
            const int target = board.neighbour(player, d);
            if (target < 0) continue;
            next = key;
            auto boxes_begin = next.begin() + 1;
            auto it = std::lower_bound(boxes_begin, next.end(), static_cast<char16_t>(target));
            if (it != next.end() && *it == target) {
                const int beyond = board.neighbour(target, d);
                if (beyond < 0 ||
                    std::binary_search(boxes_begin, next.end(), static_cast<char16_t>(beyond)))
                    continue;
                *it = static_cast<char16_t>(beyond);
                std::sort(boxes_begin, next.end());
            }
            next[0] = static_cast<char16_t>(target);
            if (!visited.insert(next).second) continue;
            if (visited.size() > limits.maxStates) {
                result.status = SolveStatus::BudgetExceeded;
                result.statesVisited = visited.size();
                return result;
            }
            nodes.push_back({next, cur, d});
            if (key_won(board, next)) {
                result.status = SolveStatus::Solved;
                result.solution = build(static_cast<std::uint32_t>(nodes.size() - 1));
                result.statesVisited = visited.size();
                return result;
            }
        }
    }
    result.status = SolveStatus::Unsolvable;
    result.statesVisited = visited.size();
    return result;
}

std::optional<std::size_t> solution_length(const Grid& g, const SolveLimits& limits) {
    auto r = solve_bfs(g, limits);
    if (r.status != SolveStatus::Solved) return std::nullopt;
    return r.solution->length();
}

bool is_playable(const Grid& g) { return solution_length(g).has_value(); }

} // namespace rlbrush
