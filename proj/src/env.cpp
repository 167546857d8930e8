#include "rlbrush/env.hpp"

#include <algorithm>
#include <cmath>

#include "rlbrush/rng.hpp"

namespace rlbrush {

std::string_view to_string(AgentKind k) {
    switch (k) {
    case AgentKind::Narrow: return "narrow";
    case AgentKind::Turtle: return "turtle";
    case AgentKind::Wide: return "wide";
    }
    return "?";
}

std::optional<AgentKind> agent_kind_from_string(std::string_view s) {
    for (auto k : kAgentKinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

AgentKind kind_of(const DesignAction& a) {
    return static_cast<AgentKind>(a.index());
}

std::vector<std::uint32_t> Observation::active_features() const {
    std::vector<std::uint32_t> out(window.size());
    for (std::size_t i = 0; i < window.size(); ++i)
        out[i] = static_cast<std::uint32_t>(i * kPaletteSize + static_cast<int>(window[i]));
    return out;
}

std::vector<float> Observation::one_hot() const {
    std::vector<float> out(feature_count(), 0.0f);
    for (auto f : active_features()) out[f] = 1.0f;
    return out;
}

Observation observe(const Grid& g, Position center, int radius) {
    Observation obs;
    obs.radius = radius;
    const int side = 2 * radius + 1;
    obs.window.reserve(static_cast<std::size_t>(side) * side);
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const Position p{center.x + dx, center.y + dy};
            obs.window.push_back(g.in_bounds(p) ? palette_of(g.at(p)) : PaletteTile::Wall);
        }
    }
    return obs;
}

std::optional<std::size_t> SolutionCache::length(const Grid& g) {
    auto key = serialize_level(g);
    if (auto it = table_.find(key); it != table_.end()) return it->second;
    // Bounded so long training runs do not grow without limit.
    if (table_.size() > 2'000'000) table_.clear();
    auto len = solution_length(g, kRewardSolveLimits);
    table_.emplace(std::move(key), len);
    return len;
}

Assessment assess(const Grid& g, SolutionCache* cache) {
    Assessment a;
    a.report = validate(g);
    const auto& r = a.report;
    if (r.playerCount == 1 && r.boxCount >= 1 && r.balanced)
        a.solutionLength = cache ? cache->length(g) : solution_length(g, kRewardSolveLimits);
    return a;
}

namespace {

// Scores live on a 2^-32 lattice. Differences and running sums of lattice
// values are exact in double, so an episode's rewards add up to exactly
// score(final) - score(initial).
double to_lattice(double x) {
    constexpr double scale = 0x1.0p32;
    return std::nearbyint(x * scale) / scale;
}

} // namespace

double score_of(const Assessment& a, const RewardWeights& rw) {
    const auto& r = a.report;
    double s = 0.0;
    if (r.playerCount == 1) s += rw.wPlayer;
    if (r.balanced && r.boxCount >= 1) s += rw.wBalance;
    if (r.floorRegionCount == 1) s += rw.wRegion;
    const double len = a.solutionLength ? static_cast<double>(*a.solutionLength) : 0.0;
    const double target = static_cast<double>(rw.targetLength);
    s += rw.wSolution * std::min(len, target) / target;
    return to_lattice(s);
}

double evaluate_score(const Grid& g, const RewardWeights& rw, SolutionCache* cache) {
    return score_of(assess(g, cache), rw);
}

bool goal_reached(const Assessment& a, const RewardWeights& rw) {
    const auto& r = a.report;
    return r.playerCount == 1 && r.balanced && r.boxCount >= 1 && r.floorRegionCount == 1 &&
           a.solutionLength && *a.solutionLength >= static_cast<std::size_t>(rw.targetLength);
}

bool goal_reached(const Grid& g, const RewardWeights& rw, SolutionCache* cache) {
    return goal_reached(assess(g, cache), rw);
}

EnvState env_reset(std::uint64_t seed, int width, int height, const FillDensity& density) {
    if (width < kMinSide || height < kMinSide)
        throw DimensionError("environment grid must be at least 3x3");
    Rng rng(seed);
    const double total = density.empty + density.wall + density.box + density.goal + density.player;
    if (!(total > 0.0)) throw ConfigError("fill densities must sum to a positive value");

    const std::array<std::pair<PaletteTile, double>, 5> table{{
        {PaletteTile::Empty, density.empty},
        {PaletteTile::Wall, density.wall},
        {PaletteTile::Box, density.box},
        {PaletteTile::Goal, density.goal},
        {PaletteTile::Player, density.player},
    }};

    Grid g(width, height);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double u = rng.uniform() * total;
        PaletteTile pick = PaletteTile::Empty;
        for (const auto& [tile, weight] : table) {
            if (weight <= 0.0) continue;
            pick = tile;
            if (u < weight) break;
            u -= weight;
        }
        // Sequential placement keeps the last sampled player.
        g = apply_palette(g, g.position(i), pick);
    }

    EnvState s{g, {}, 0, width * height * 2, seed};
    s.agentPos = g.position(rng.below(g.size()));
    return s;
}

Position next_scan_position(const Grid& g, Position p) {
    const auto next = (g.index(p) + 1) % g.size();
    return g.position(next);
}

StepResult env_step(const EnvState& s, AgentKind kind, const DesignAction& a,
                    const RewardWeights& rw, SolutionCache* cache) {
    if (kind_of(a) != kind) throw ActionError("action variant does not match agent kind");

    EnvState next = s;
    switch (kind) {
    case AgentKind::Narrow: {
        const auto& act = std::get<NarrowAction>(a);
        if (act.change) next.grid = apply_palette(s.grid, s.agentPos, *act.change);
        next.agentPos = next_scan_position(s.grid, s.agentPos);
        break;
    }
    case AgentKind::Turtle: {
        const auto& act = std::get<TurtleAction>(a);
        if (const auto* dir = std::get_if<Direction>(&act.op)) {
            Position p = step(s.agentPos, *dir);
            p.x = std::clamp(p.x, 0, s.grid.width() - 1);
            p.y = std::clamp(p.y, 0, s.grid.height() - 1);
            next.agentPos = p;
        } else {
            next.grid = apply_palette(s.grid, s.agentPos, std::get<PaletteTile>(act.op));
        }
        break;
    }
    case AgentKind::Wide: {
        const auto& act = std::get<WideAction>(a);
        next.grid = apply_palette(s.grid, act.target, act.change);
        break;
    }
    }
    ++next.stepsTaken;

    const auto before = assess(s.grid, cache);
    const auto after = next.grid == s.grid ? before : assess(next.grid, cache);
    StepResult out{std::move(next), score_of(after, rw) - score_of(before, rw), false};
    out.done = goal_reached(after, rw) || out.state.stepsTaken >= out.state.episodeCap;
    return out;
}

} // namespace rlbrush
