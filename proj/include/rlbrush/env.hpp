#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rlbrush/level.hpp"
#include "rlbrush/solver.hpp"

namespace rlbrush {

enum class AgentKind : std::uint8_t { Narrow, Turtle, Wide };
inline constexpr std::array<AgentKind, 3> kAgentKinds{AgentKind::Narrow, AgentKind::Turtle,
                                                      AgentKind::Wide};

std::string_view to_string(AgentKind k); // "narrow", "turtle", "wide"
std::optional<AgentKind> agent_kind_from_string(std::string_view s);

struct NarrowAction {
    std::optional<PaletteTile> change; // nullopt is the no-op
    friend bool operator==(const NarrowAction&, const NarrowAction&) = default;
};

struct TurtleAction {
    std::variant<Direction, PaletteTile> op;
    friend bool operator==(const TurtleAction&, const TurtleAction&) = default;
};

struct WideAction {
    Position target;
    PaletteTile change = PaletteTile::Empty;
    friend bool operator==(const WideAction&, const WideAction&) = default;
};

using DesignAction = std::variant<NarrowAction, TurtleAction, WideAction>;

AgentKind kind_of(const DesignAction& a);

// Square window of palette tiles around a centre, padded with Wall outside
// the grid. The one-hot encoding is implicit: cell i with tile t activates
// feature i * kPaletteSize + t.
struct Observation {
    int radius = 0;
    std::vector<PaletteTile> window; // (2r+1)^2, row-major
    std::optional<Position> agentPos;

    int side() const { return 2 * radius + 1; }
    std::size_t feature_count() const { return window.size() * kPaletteSize; }
    std::vector<std::uint32_t> active_features() const;
    std::vector<float> one_hot() const;
};

Observation observe(const Grid& g, Position center, int radius);

struct RewardWeights {
    double wPlayer = 1.0;
    double wBalance = 1.0;
    double wRegion = 1.0;
    double wSolution = 2.0;
    int targetLength = 10;
};

struct FillDensity {
    double empty = 0.50;
    double wall = 0.30;
    double box = 0.08;
    double goal = 0.08;
    double player = 0.04;
};

struct EnvState {
    Grid grid;
    Position agentPos;
    int stepsTaken = 0;
    int episodeCap = 0;
    std::uint64_t rngSeed = 0;
};

// Solver budget inside the reward. State-count bound only, so rewards do not
// depend on machine speed.
inline constexpr SolveLimits kRewardSolveLimits{100'000, 1'000'000};

// Memo of solution lengths keyed by serialized level. Training revisits the
// same grids constantly (every no-op), so this is where solver time goes away.
class SolutionCache {
  public:
    std::optional<std::size_t> length(const Grid& g);
    std::size_t size() const { return table_.size(); }

  private:
    std::unordered_map<std::string, std::optional<std::size_t>> table_;
};

// Score terms that need a solver call are skipped when the level cannot be
// valid anyway.
struct Assessment {
    ValidationReport report;
    std::optional<std::size_t> solutionLength;
};
Assessment assess(const Grid& g, SolutionCache* cache = nullptr);

double evaluate_score(const Grid& g, const RewardWeights& rw, SolutionCache* cache = nullptr);
double score_of(const Assessment& a, const RewardWeights& rw);
bool goal_reached(const Grid& g, const RewardWeights& rw, SolutionCache* cache = nullptr);
bool goal_reached(const Assessment& a, const RewardWeights& rw);

EnvState env_reset(std::uint64_t seed, int width, int height, const FillDensity& density = {});

struct StepResult {
    EnvState state;
    double reward = 0.0;
    bool done = false;
};

StepResult env_step(const EnvState& s, AgentKind kind, const DesignAction& a,
                    const RewardWeights& rw, SolutionCache* cache = nullptr);

// Where a Narrow agent goes next: row-major scan, wrapping.
Position next_scan_position(const Grid& g, Position p);

} // namespace rlbrush
