#pragma once

// The model manager: turns the current level into one suggestion per agent
// plus a majority-vote suggestion.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlbrush/agents.hpp"

namespace rlbrush {

inline constexpr int kMaxSteps = 10;
inline constexpr int kMaxToolRadius = 10;

struct SuggestionParams {
    int steps = 1;
    int toolRadius = 3;
    std::optional<Position> pivot;
};

void check_params(const SuggestionParams& params);

struct Suggestion {
    std::string agentName; // narrow, turtle, wide, majority
    Grid resultGrid;
    Diff diff;
};

enum class ChangeOrigin { ManualEdit, SuggestionAccepted, InternalStep };

struct ChangeEvent {
    Grid newGrid;
    Position pivot;
    ChangeOrigin origin = ChangeOrigin::ManualEdit;
};

struct AgentSet {
    Policy narrow;
    Policy turtle;
    Policy wide;

    const Policy& get(AgentKind k) const;
};

// Zero-weight policies for every kind, sized for the given grid.
AgentSet zero_agents(int gridWidth = 5, int gridHeight = 5);

Position resolve_pivot(const Grid& g, std::optional<Position> lastClicked);

struct Window {
    Grid maskedGrid;                  // non-editable cells shown as Wall
    std::vector<std::uint8_t> editable; // row-major flags
    bool full = false;

    bool is_editable(const Grid& g, Position p) const { return g.in_bounds(p) && editable[g.index(p)]; }
    std::size_t editable_count() const;
};

// Von Neumann ball of radius r around the pivot, or the whole grid once
// r >= ceil(max(width, height) / 2).
Window crop_window(const Grid& g, Position pivot, int radius);

// Runs params.steps internal steps. Each step starts the agent at the pivot
// and acts greedily on the masked level until one effective tile change
// lands inside the window: Narrow scans row-major from the pivot, Turtle
// walks, Wide takes a single action. Narrow and Turtle give up after
// width * height actions. Changes outside the window are dropped, and so is
// a Player placement that would have to remove a player outside it.
// Because every step restarts at the pivot, n steps equal n chained
// single-step rollouts.
Grid rollout_agent(const Policy& p, const Grid& g, const SuggestionParams& params);

// Entry kept iff at least `quorum` diffs contain it verbatim. Should two
// different mutations of one cell both reach quorum, the one with more votes
// wins, then the earlier input.
Diff majority_vote(std::span<const Diff> diffs, int quorum = 2);

// Order: narrow, turtle, wide, majority. A policy that cannot act on this
// grid shape contributes an empty diff.
std::vector<Suggestion> generate_suggestions(const Grid& g, const SuggestionParams& params,
                                             const AgentSet& agents);

} // namespace rlbrush
