#include "rlbrush/suggest.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace rlbrush {

void check_params(const SuggestionParams& params) {
    if (params.steps < 1 || params.steps > kMaxSteps)
        throw ConfigError("steps must be in [1, " + std::to_string(kMaxSteps) + "]");
    if (params.toolRadius < 1) throw ConfigError("tool radius must be at least 1");
}

const Policy& AgentSet::get(AgentKind k) const {
    switch (k) {
    case AgentKind::Narrow: return narrow;
    case AgentKind::Turtle: return turtle;
    case AgentKind::Wide: return wide;
    }
    return narrow;
}

AgentSet zero_agents(int gridWidth, int gridHeight) {
    return {make_policy(AgentKind::Narrow, gridWidth, gridHeight),
            make_policy(AgentKind::Turtle, gridWidth, gridHeight),
            make_policy(AgentKind::Wide, gridWidth, gridHeight)};
}

Position resolve_pivot(const Grid& g, std::optional<Position> lastClicked) {
    if (lastClicked) return *lastClicked;
    return {g.width() / 2, g.height() / 2};
}

std::size_t Window::editable_count() const {
    return static_cast<std::size_t>(std::count(editable.begin(), editable.end(), std::uint8_t{1}));
}

Window crop_window(const Grid& g, Position pivot, int radius) {
    if (!g.in_bounds(pivot)) throw BoundsError("pivot out of bounds");
    const int side = std::max(g.width(), g.height());
    const bool full = radius >= (side + 1) / 2;

    Window w{g, std::vector<std::uint8_t>(g.size(), 1), full};
    if (full) return w;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Position p = g.position(i);
        if (std::abs(p.x - pivot.x) + std::abs(p.y - pivot.y) <= radius) continue;
        w.editable[i] = 0;
        w.maskedGrid.set(p, {Terrain::Wall, Occupant::None});
    }
    return w;
}

namespace {

struct Edit {
    Position target;
    PaletteTile tile;
};

bool player_outside(const Grid& g, const Window& w) {
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!w.editable[i] && g[i].occupant == Occupant::Player) return true;
    return false;
}

// One internal step; returns the grid after the first effective change, or
// the input grid when none happened within the action budget.
Grid rollout_step(const Policy& p, const Grid& g, const Window& window, Position pivot) {
    Grid masked = g;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!window.editable[i]) masked.set(g.position(i), {Terrain::Wall, Occupant::None});

    const bool blockedPlayer = player_outside(g, window);
    const int budget = p.kind == AgentKind::Wide ? 1 : static_cast<int>(g.size());
    Position agent = pivot;
    for (int i = 0; i < budget; ++i) {
        const DesignAction action = infer_greedy(p, masked, agent);
        std::optional<Edit> edit;
        switch (p.kind) {
        case AgentKind::Narrow: {
            const auto& a = std::get<NarrowAction>(action);
            if (a.change) edit = Edit{agent, *a.change};
            agent = next_scan_position(g, agent);
            break;
        }
        case AgentKind::Turtle: {
            const auto& a = std::get<TurtleAction>(action);
            if (const auto* dir = std::get_if<Direction>(&a.op)) {
                Position next = step(agent, *dir);
                next.x = std::clamp(next.x, 0, g.width() - 1);
                next.y = std::clamp(next.y, 0, g.height() - 1);
                agent = next;
            } else {
                edit = Edit{agent, std::get<PaletteTile>(a.op)};
            }
            break;
        }
        case AgentKind::Wide: {
            const auto& a = std::get<WideAction>(action);
            edit = Edit{a.target, a.change};
            break;
        }
        }
        if (!edit || !window.is_editable(g, edit->target)) continue;
        if (edit->tile == PaletteTile::Player && blockedPlayer) continue;
        Grid next = apply_palette(g, edit->target, edit->tile);
        if (next != g) return next;
    }
    return g;
}

} // namespace

Grid rollout_agent(const Policy& p, const Grid& g, const SuggestionParams& params) {
    check_params(params);
    const Position pivot = resolve_pivot(g, params.pivot);
    // The window is fixed by the pivot and radius for the whole rollout.
    const Window window = crop_window(g, pivot, params.toolRadius);
    Grid current = g;
    for (int k = 0; k < params.steps; ++k) current = rollout_step(p, current, window, pivot);
    return current;
}

Diff majority_vote(std::span<const Diff> diffs, int quorum) {
    if (quorum < 1) throw ConfigError("quorum must be at least 1");

    struct Tally {
        DiffEntry entry;
        int votes = 0;
        std::size_t first = 0; // order of first appearance
    };
    std::map<Position, Cell> base;
    std::map<Position, std::vector<Tally>> tallies;
    std::size_t order = 0;
    for (const auto& d : diffs) {
        for (const auto& e : d.entries) {
            if (auto [it, inserted] = base.emplace(e.pos, e.before); !inserted && it->second != e.before)
                throw InconsistentBaseError("diffs disagree on the base cell at (" + std::to_string(e.pos.x) +
                                            "," + std::to_string(e.pos.y) + ")");
            auto& list = tallies[e.pos];
            auto hit = std::find_if(list.begin(), list.end(), [&](const Tally& t) { return t.entry == e; });
            if (hit == list.end()) list.push_back({e, 1, order});
            else ++hit->votes;
            ++order;
        }
    }

    Diff out;
    for (const auto& [pos, list] : tallies) {
        const Tally* best = nullptr;
        for (const auto& t : list) {
            if (t.votes < quorum) continue;
            if (!best || t.votes > best->votes || (t.votes == best->votes && t.first < best->first)) best = &t;
        }
        if (best) out.entries.push_back(best->entry);
    }
    return out;
}

std::vector<Suggestion> generate_suggestions(const Grid& g, const SuggestionParams& params,
                                             const AgentSet& agents) {
    check_params(params);
    SuggestionParams resolved = params;
    resolved.pivot = resolve_pivot(g, params.pivot);

    std::vector<Suggestion> out;
    std::vector<Diff> diffs;
    out.reserve(4);
    for (auto kind : kAgentKinds) {
        Grid result = g;
        try {
            result = rollout_agent(agents.get(kind), g, resolved);
        } catch (const ShapeError&) {
            result = g;
        }
        Diff d = diff_grids(g, result);
        diffs.push_back(d);
        out.push_back({std::string(to_string(kind)), std::move(result), std::move(d)});
    }
    Diff vote = majority_vote(diffs, 2);
    Grid voted = apply_diff(g, vote);
    out.push_back({"majority", std::move(voted), std::move(vote)});
    return out;
}

} // namespace rlbrush
