#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rlbrush/level.hpp"

namespace rlbrush {

enum class Direction : std::uint8_t { Up, Down, Left, Right };

// Expansion order for the search; also the tie-break between equal-length solutions.
inline constexpr std::array<Direction, 4> kDirections{Direction::Up, Direction::Down,
                                                      Direction::Left, Direction::Right};

Position step(Position p, Direction d);
char direction_letter(Direction d);

struct GameState {
    Position player;
    std::vector<Position> boxes; // sorted row-major

    friend bool operator==(const GameState&, const GameState&) = default;
};

struct Solution {
    std::vector<Direction> moves;
    std::size_t length() const { return moves.size(); }
};

struct SolveLimits {
    std::size_t maxStates = 1'000'000;
    long maxMillis = 2000;
};

enum class SolveStatus { Solved, Unsolvable, Invalid, BudgetExceeded };
std::string_view to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::Invalid;
    std::optional<Solution> solution; // set iff Solved
    std::size_t statesVisited = 0;
};

// Player and box positions read off the grid. Requires exactly one player.
GameState initial_state(const Grid& g);

// nullopt means the move is blocked.
std::optional<GameState> step_game(const Grid& g, const GameState& s, Direction dir);
bool is_won(const Grid& g, const GameState& s);

// Breadth-first search over player moves. Returns a shortest solution.
SolveResult solve_bfs(const Grid& g, const SolveLimits& limits = {});
std::optional<std::size_t> solution_length(const Grid& g, const SolveLimits& limits = {});

// One player, balanced, at least one box, and a solution within default limits.
bool is_playable(const Grid& g);

} // namespace rlbrush
