#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlbrush/env.hpp"

namespace rlbrush {

inline constexpr int kPolicyFormatVersion = 1;
inline constexpr int kFeatureSpecVersion = 1;

// Linear action values over sparse binary features. Weights are stored
// feature-major (weights[f * actions + a]) so one feature's row covers
// every action and evaluating all actions is a sum of contiguous rows.
class LinearQ {
  public:
    LinearQ() = default;
    LinearQ(std::size_t features, std::size_t actions);

    std::size_t features() const { return features_; }
    std::size_t actions() const { return actions_; }
    std::span<const double> weights() const { return weights_; }
    std::span<double> weights() { return weights_; }

    double& weight(std::size_t feature, std::size_t action) { return weights_[feature * actions_ + action]; }

    void values(std::span<const std::uint32_t> active, std::span<double> out) const;
    double value(std::span<const std::uint32_t> active, std::size_t action) const;

    // Moves Q(active, action) by step: each active feature takes step / |active|.
    void nudge(std::span<const std::uint32_t> active, std::size_t action, double step);

    friend bool operator==(const LinearQ&, const LinearQ&) = default;

  private:
    std::size_t features_ = 0;
    std::size_t actions_ = 0;
    std::vector<double> weights_;
};

struct FeatureSpec {
    std::string encoding = "onehot-window";
    int version = kFeatureSpecVersion;
    int channels = kPaletteSize;
    // Grid the action space was built for; only Wide depends on it.
    int gridWidth = 5;
    int gridHeight = 5;

    friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

struct TrainConfig {
    AgentKind kind = AgentKind::Narrow;
    long episodes = 1000;
    double learningRate = 0.1;
    double discount = 0.9;
    double epsilonStart = 1.0;
    double epsilonEnd = 0.05;
    std::uint64_t seed = 0;
    int gridWidth = 5;
    int gridHeight = 5;
    int windowRadius = 2;
    RewardWeights rewardWeights{};
};

struct Policy {
    AgentKind kind = AgentKind::Narrow;
    int windowRadius = 2;
    FeatureSpec featureSpec{};
    LinearQ q;
    long trainedEpisodes = 0;
    std::optional<TrainConfig> trainConfig;

    friend bool operator==(const Policy& a, const Policy& b) {
        return a.kind == b.kind && a.windowRadius == b.windowRadius &&
               a.featureSpec == b.featureSpec && a.q == b.q && a.trainedEpisodes == b.trainedEpisodes;
    }
};

// All-zero policy sized for the given grid.
Policy make_policy(AgentKind kind, int gridWidth = 5, int gridHeight = 5, int windowRadius = 2);

std::size_t action_count(AgentKind kind, int gridWidth, int gridHeight);

// Fixed order; lower index wins greedy ties.
//   Narrow: no-op, then change to Empty, Wall, Player, Box, Goal.
//   Turtle: move Up, Down, Left, Right, then change to the five tiles.
//   Wide:   row-major target position, then the five tiles at that position.
std::vector<DesignAction> enumerate_actions(AgentKind kind, const Grid& g);
std::size_t action_index(const DesignAction& a, int gridWidth);

// Centre of the observation window for this agent on this grid.
Position observation_center(AgentKind kind, const Grid& g, Position agentPos);
Position grid_center(const Grid& g);

double action_value(const Policy& p, const Observation& obs, const DesignAction& a);
DesignAction infer_greedy(const Policy& p, const Grid& g, Position pivot);

struct TrainingReport {
    std::vector<double> episodeReturns;
    double playableFractionBefore = 0.0;
    double playableFractionAfter = 0.0;
    double seconds = 0.0;
};

struct TrainResult {
    Policy policy;
    TrainingReport report;
};

inline constexpr int kEvaluationSeedCount = 200;

// Seed of the i-th fixed evaluation episode; independent of any training seed.
std::uint64_t evaluation_seed(int i);

struct EvaluationResult {
    double playableFraction = 0.0;
    std::optional<double> meanSolutionLength; // over playable final grids
    int episodes = 0;
};

// Runs the greedy policy for one full episode per seed and solves the final grids.
EvaluationResult evaluate_policy(const Policy& p, int seeds, int gridWidth, int gridHeight,
                                 const RewardWeights& rw = {});

void validate_config(const TrainConfig& cfg);
TrainResult train(const TrainConfig& cfg);

void save_policy(const Policy& p, const std::filesystem::path& path);
Policy load_policy(const std::filesystem::path& path);
std::string policy_to_json(const Policy& p);
Policy policy_from_json(const std::string& text);

} // namespace rlbrush
