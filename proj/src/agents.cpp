#include "rlbrush/agents.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rlbrush/kernels.hpp"
#include "rlbrush/rng.hpp"

namespace rlbrush {

namespace {

constexpr std::array<PaletteTile, kPaletteSize> kTiles{PaletteTile::Empty, PaletteTile::Wall,
                                                       PaletteTile::Player, PaletteTile::Box,
                                                       PaletteTile::Goal};

DesignAction action_at(AgentKind kind, std::size_t index, int gridWidth) {
    switch (kind) {
    case AgentKind::Narrow:
        if (index == 0) return NarrowAction{};
        return NarrowAction{kTiles[index - 1]};
    case AgentKind::Turtle:
        if (index < 4) return TurtleAction{kDirections[index]};
        return TurtleAction{kTiles[index - 4]};
    case AgentKind::Wide: {
        const auto cell = index / kPaletteSize;
        const Position p{static_cast<int>(cell % gridWidth), static_cast<int>(cell / gridWidth)};
        return WideAction{p, kTiles[index % kPaletteSize]};
    }
    }
    return NarrowAction{};
}

std::size_t feature_count(int windowRadius) {
    const std::size_t side = 2 * static_cast<std::size_t>(windowRadius) + 1;
    return side * side * kPaletteSize;
}

void check_grid(const Policy& p, const Grid& g) {
    if (p.kind == AgentKind::Wide &&
        (g.width() != p.featureSpec.gridWidth || g.height() != p.featureSpec.gridHeight))
        throw ShapeError("wide policy was built for a " + std::to_string(p.featureSpec.gridWidth) +
                         "x" + std::to_string(p.featureSpec.gridHeight) + " grid");
}

} // namespace

LinearQ::LinearQ(std::size_t features, std::size_t actions)
    : features_(features), actions_(actions), weights_(features * actions, 0.0) {}

void LinearQ::values(std::span<const std::uint32_t> active, std::span<double> out) const {
    if (out.size() != actions_) throw ShapeError("value buffer does not match action count");
    for (auto f : active)
        if (f >= features_) throw ShapeError("feature index out of range");
    kernels::row_sum(weights_.data(), actions_, active, out);
}

double LinearQ::value(std::span<const std::uint32_t> active, std::size_t action) const {
    if (action >= actions_) throw ShapeError("action index out of range");
    double acc = 0.0;
    for (auto f : active) {
        if (f >= features_) throw ShapeError("feature index out of range");
        acc += weights_[static_cast<std::size_t>(f) * actions_ + action];
    }
    return acc;
}

void LinearQ::nudge(std::span<const std::uint32_t> active, std::size_t action, double step) {
    if (active.empty()) return;
    const double share = step / static_cast<double>(active.size());
    for (auto f : active) weights_[static_cast<std::size_t>(f) * actions_ + action] += share;
}

std::size_t action_count(AgentKind kind, int gridWidth, int gridHeight) {
    switch (kind) {
    case AgentKind::Narrow: return 1 + kPaletteSize;
    case AgentKind::Turtle: return 4 + kPaletteSize;
    case AgentKind::Wide:
        return static_cast<std::size_t>(gridWidth) * gridHeight * kPaletteSize;
    }
    return 0;
}

Policy make_policy(AgentKind kind, int gridWidth, int gridHeight, int windowRadius) {
    if (windowRadius < 1) throw ConfigError("window radius must be at least 1");
    if (gridWidth < kMinSide || gridHeight < kMinSide) throw DimensionError("grid must be at least 3x3");
    Policy p;
    p.kind = kind;
    p.windowRadius = windowRadius;
    p.featureSpec.gridWidth = gridWidth;
    p.featureSpec.gridHeight = gridHeight;
    p.q = LinearQ(feature_count(windowRadius), action_count(kind, gridWidth, gridHeight));
    return p;
}

std::vector<DesignAction> enumerate_actions(AgentKind kind, const Grid& g) {
    const auto n = action_count(kind, g.width(), g.height());
    std::vector<DesignAction> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(action_at(kind, i, g.width()));
    return out;
}

std::size_t action_index(const DesignAction& a, int gridWidth) {
    auto tile_index = [](PaletteTile t) { return static_cast<std::size_t>(t); };
    switch (kind_of(a)) {
    case AgentKind::Narrow: {
        const auto& n = std::get<NarrowAction>(a);
        return n.change ? 1 + tile_index(*n.change) : 0;
    }
    case AgentKind::Turtle: {
        const auto& t = std::get<TurtleAction>(a);
        if (const auto* d = std::get_if<Direction>(&t.op)) return static_cast<std::size_t>(*d);
        return 4 + tile_index(std::get<PaletteTile>(t.op));
    }
    case AgentKind::Wide: {
        const auto& w = std::get<WideAction>(a);
        const auto cell = static_cast<std::size_t>(w.target.y) * gridWidth + w.target.x;
        return cell * kPaletteSize + tile_index(w.change);
    }
    }
    return 0;
}

Position grid_center(const Grid& g) { return {g.width() / 2, g.height() / 2}; }

Position observation_center(AgentKind kind, const Grid& g, Position agentPos) {
    return kind == AgentKind::Wide ? grid_center(g) : agentPos;
}

double action_value(const Policy& p, const Observation& obs, const DesignAction& a) {
    if (obs.radius != p.windowRadius || obs.feature_count() != p.q.features())
        throw ShapeError("observation window does not match the policy");
    if (kind_of(a) != p.kind) throw ShapeError("action kind does not match the policy");
    if (p.kind == AgentKind::Wide) {
        const auto& w = std::get<WideAction>(a);
        if (w.target.x < 0 || w.target.y < 0 || w.target.x >= p.featureSpec.gridWidth ||
            w.target.y >= p.featureSpec.gridHeight)
            throw ShapeError("wide action target outside the policy's grid");
    }
    const auto active = obs.active_features();
    return p.q.value(active, action_index(a, p.featureSpec.gridWidth));
}

DesignAction infer_greedy(const Policy& p, const Grid& g, Position pivot) {
    check_grid(p, g);
    if (!g.in_bounds(pivot)) throw BoundsError("pivot out of bounds");
    const auto obs = observe(g, observation_center(p.kind, g, pivot), p.windowRadius);
    const auto active = obs.active_features();
    std::vector<double> values(p.q.actions());
    p.q.values(active, values);
    return action_at(p.kind, kernels::argmax(values), g.width());
}

std::uint64_t evaluation_seed(int i) {
    return mix_seed(0x5EED'E7A1'0000'0001ull, static_cast<std::uint64_t>(i));
}

EvaluationResult evaluate_policy(const Policy& p, int seeds, int gridWidth, int gridHeight,
                                 const RewardWeights& rw) {
    EvaluationResult out;
    if (seeds <= 0) return out;
    SolutionCache cache;
    int playable = 0;
    double lengthSum = 0.0;
    std::vector<double> values(p.q.actions());
    for (int i = 0; i < seeds; ++i) {
        EnvState s = env_reset(evaluation_seed(i), gridWidth, gridHeight);
        check_grid(p, s.grid);
        while (true) {
            const auto obs = observe(s.grid, observation_center(p.kind, s.grid, s.agentPos), p.windowRadius);
            const auto active = obs.active_features();
            p.q.values(active, values);
            const auto a = action_at(p.kind, kernels::argmax(values), gridWidth);
            auto r = env_step(s, p.kind, a, rw, &cache);
            s = std::move(r.state);
            if (r.done) break;
        }
        if (auto len = solution_length(s.grid)) {
            ++playable;
            lengthSum += static_cast<double>(*len);
        }
    }
    out.episodes = seeds;
    out.playableFraction = static_cast<double>(playable) / seeds;
    if (playable > 0) out.meanSolutionLength = lengthSum / playable;
    return out;
}

void validate_config(const TrainConfig& cfg) {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (cfg.episodes < 1) fail("episodes must be at least 1");
    if (!(cfg.learningRate > 0.0) || !std::isfinite(cfg.learningRate)) fail("learning rate must be positive");
    if (!(cfg.discount >= 0.0 && cfg.discount <= 1.0)) fail("discount must be in [0, 1]");
    if (!(cfg.epsilonStart >= 0.0 && cfg.epsilonStart <= 1.0)) fail("epsilonStart must be in [0, 1]");
    if (!(cfg.epsilonEnd >= 0.0 && cfg.epsilonEnd <= 1.0)) fail("epsilonEnd must be in [0, 1]");
    if (cfg.gridWidth < kMinSide || cfg.gridHeight < kMinSide) fail("grid must be at least 3x3");
    if (cfg.windowRadius < 1) fail("window radius must be at least 1");
    if (cfg.rewardWeights.targetLength < 1) fail("targetLength must be at least 1");
    for (double w : {cfg.rewardWeights.wPlayer, cfg.rewardWeights.wBalance, cfg.rewardWeights.wRegion,
                     cfg.rewardWeights.wSolution})
        if (!std::isfinite(w)) fail("reward weights must be finite");
}

TrainResult train(const TrainConfig& cfg) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    TrainResult out;
    Policy& p = out.policy;
    p = make_policy(cfg.kind, cfg.gridWidth, cfg.gridHeight, cfg.windowRadius);
    p.trainConfig = cfg;

    out.report.playableFractionBefore =
        evaluate_policy(p, kEvaluationSeedCount, cfg.gridWidth, cfg.gridHeight, cfg.rewardWeights)
            .playableFraction;

    Rng rng(mix_seed(cfg.seed, 0xB0B));
    SolutionCache cache;
    const std::size_t nActions = p.q.actions();
    std::vector<double> values(nActions);
    std::vector<double> nextValues(nActions);
    out.report.episodeReturns.reserve(static_cast<std::size_t>(cfg.episodes));

    for (long ep = 0; ep < cfg.episodes; ++ep) {
        const double frac = cfg.episodes > 1 ? static_cast<double>(ep) / (cfg.episodes - 1) : 1.0;
        const double epsilon = cfg.epsilonStart + (cfg.epsilonEnd - cfg.epsilonStart) * frac;

        EnvState s = env_reset(mix_seed(cfg.seed, static_cast<std::uint64_t>(ep)), cfg.gridWidth,
                               cfg.gridHeight);
        auto active = observe(s.grid, observation_center(cfg.kind, s.grid, s.agentPos), cfg.windowRadius)
                          .active_features();
        double ret = 0.0;
        while (true) {
            p.q.values(active, values);
            const bool explore = rng.uniform() < epsilon;
            const std::size_t a = explore ? rng.below(nActions) : kernels::argmax(values);

            auto r = env_step(s, cfg.kind, action_at(cfg.kind, a, cfg.gridWidth), cfg.rewardWeights, &cache);
            ret += r.reward;

            double target = r.reward;
            std::vector<std::uint32_t> nextActive;
            if (!r.done) {
                nextActive = observe(r.state.grid, observation_center(cfg.kind, r.state.grid, r.state.agentPos),
                                     cfg.windowRadius)
                                 .active_features();
                p.q.values(nextActive, nextValues);
                target += cfg.discount * nextValues[kernels::argmax(nextValues)];
            }
            p.q.nudge(active, a, cfg.learningRate * (target - values[a]));

            if (r.done) break;
            s = std::move(r.state);
            active = std::move(nextActive);
        }
        out.report.episodeReturns.push_back(ret);
    }
    p.trainedEpisodes = cfg.episodes;

    out.report.playableFractionAfter =
        evaluate_policy(p, kEvaluationSeedCount, cfg.gridWidth, cfg.gridHeight, cfg.rewardWeights)
            .playableFraction;
    out.report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace rlbrush
