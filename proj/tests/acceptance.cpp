// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Long-running (the training criterion takes minutes).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include "corpus.hpp"
#include "fixture_logs.hpp"
#include "oracles.hpp"
#include "rlbrush/agents.hpp"
#include "rlbrush/env.hpp"
#include "rlbrush/rng.hpp"
#include "rlbrush/session.hpp"
#include "rlbrush/solver.hpp"
#include "rlbrush/suggest.hpp"

using namespace rlbrush;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Grid random_grid(Rng& rng, int w = 5, int h = 5) {
    Grid g(w, h);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (rng.uniform() < 0.6) g = apply_palette(g, g.position(i), static_cast<PaletteTile>(rng.below(kPaletteSize)));
    return g;
}

Policy random_policy(AgentKind kind, Rng& rng) {
    Policy p = make_policy(kind);
    for (auto& x : p.q.weights()) x = rng.uniform() * 2.0 - 1.0;
    return p;
}

bool replays_to_win(const Grid& g, const Solution& s) {
    GameState st = initial_state(g);
    for (auto d : s.moves) {
        auto next = step_game(g, st, d);
        if (!next) return false;
        st = *next;
    }
    return is_won(g, st);
}

std::vector<Grid> solver_corpus() {
    auto levels = corpus::random_corpus(2020, 500);
    for (const auto& g : corpus::microbans()) levels.push_back(g);
    return levels;
}

Outcome solver_matches_oracle() {
    const auto levels = solver_corpus();
    const auto t0 = Clock::now();
    std::vector<SolveResult> results;
    results.reserve(levels.size());
    for (const auto& g : levels) results.push_back(solve_bfs(g));
    const double solveSeconds = seconds_since(t0);

    int solvable = 0, mismatches = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto truth = oracle::IddfsSolver(levels[i]).solve();
        const auto& got = results[i];
        bool ok;
        if (!truth.valid) ok = got.status == SolveStatus::Invalid;
        else if (truth.optimum)
            ok = got.status == SolveStatus::Solved && got.solution->length() == static_cast<std::size_t>(*truth.optimum);
        else ok = got.status == SolveStatus::Unsolvable;
        solvable += truth.optimum.has_value();
        mismatches += !ok;
    }
    return {mismatches == 0 && solveSeconds < 60.0,
            fmt("%zu levels, %d solvable, %d disagreements, solver time %.2f s", levels.size(), solvable, mismatches,
                solveSeconds)};
}

Outcome solutions_replay() {
    int solved = 0, bad = 0;
    for (const auto& g : solver_corpus()) {
        const auto r = solve_bfs(g);
        if (r.status != SolveStatus::Solved) continue;
        ++solved;
        bad += !replays_to_win(g, *r.solution);
    }
    return {bad == 0 && solved > 0, fmt("%d solutions replayed, %d failed", solved, bad)};
}

// Expected vote result when no two mutations of one cell can both reach
// quorum, which holds for three inputs.
bool majority_law_holds(const std::vector<Diff>& diffs) {
    const Diff out = majority_vote(diffs);
    std::vector<DiffEntry> expected;
    for (const auto& d : diffs)
        for (const auto& e : d.entries) {
            int votes = 0;
            for (const auto& other : diffs) votes += std::count(other.entries.begin(), other.entries.end(), e) > 0;
            if (votes >= 2 && std::find(expected.begin(), expected.end(), e) == expected.end()) expected.push_back(e);
        }
    if (out.size() != expected.size()) return false;
    for (const auto& e : out.entries)
        if (std::find(expected.begin(), expected.end(), e) == expected.end()) return false;
    return true;
}

Outcome majority_vote_law() {
    Rng rng(31);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Grid g = random_grid(rng, 3, 3);
        std::vector<Diff> diffs;
        for (int k = 0; k < 3; ++k) diffs.push_back(diff_grids(g, random_grid(rng, 3, 3)));
        failures += !majority_law_holds(diffs);
    }

    // Every ordered triple of diffs with at most two entries, drawn from two
    // candidate mutations per cell of an empty 3x3 grid.
    const Grid base(3, 3);
    const Cell afters[] = {{Terrain::Wall, Occupant::None}, {Terrain::GoalPad, Occupant::None}};
    std::vector<Diff> pool{Diff{}};
    for (std::size_t c = 0; c < base.size(); ++c)
        for (const auto& a : afters) pool.push_back(Diff{{{base.position(c), base[c], a}}});
    for (std::size_t c1 = 0; c1 < base.size(); ++c1)
        for (std::size_t c2 = c1 + 1; c2 < base.size(); ++c2)
            for (const auto& a1 : afters)
                for (const auto& a2 : afters)
                    pool.push_back(Diff{{{base.position(c1), base[c1], a1}, {base.position(c2), base[c2], a2}}});
    long triples = 0;
    for (const auto& a : pool)
        for (const auto& b : pool)
            for (const auto& c : pool) {
                failures += !majority_law_holds({a, b, c});
                ++triples;
            }
    return {failures == 0, fmt("1000 random triples and %ld exhaustive triples, %d failures", triples, failures)};
}

Outcome window_is_manhattan_ball() {
    int failures = 0;
    const Grid g(5, 5);
    for (int r = 1; r <= 5; ++r)
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Position pivot = g.position(i);
            const Window win = crop_window(g, pivot, r);
            auto expected = oracle::manhattan_ball(5, 5, pivot, r);
            if (r >= 3) std::fill(expected.begin(), expected.end(), 1);
            failures += win.editable != expected;
            failures += (r >= 3) != win.full;
        }

    // No suggestion touches a cell outside the ball.
    Rng rng(32);
    for (int trial = 0; trial < 1000; ++trial) {
        const Grid grid = random_grid(rng);
        const AgentSet agents{random_policy(AgentKind::Narrow, rng), random_policy(AgentKind::Turtle, rng),
                              random_policy(AgentKind::Wide, rng)};
        SuggestionParams params;
        params.steps = 1 + static_cast<int>(rng.below(kMaxSteps));
        params.toolRadius = 1 + static_cast<int>(rng.below(2));
        params.pivot = grid.position(rng.below(grid.size()));
        const auto ball = oracle::manhattan_ball(5, 5, *params.pivot, params.toolRadius);
        for (const auto& s : generate_suggestions(grid, params, agents))
            for (const auto& e : s.diff.entries) failures += !ball[grid.index(e.pos)];
    }
    return {failures == 0, fmt("radius 1..5 at all 25 pivots plus 1000 masked rollouts, %d failures", failures)};
}

Outcome steps_compose() {
    Rng rng(33);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Grid g = random_grid(rng);
        const AgentSet agents{random_policy(AgentKind::Narrow, rng), random_policy(AgentKind::Turtle, rng),
                              random_policy(AgentKind::Wide, rng)};
        SuggestionParams one;
        one.toolRadius = 1 + static_cast<int>(rng.below(3));
        one.pivot = g.position(rng.below(g.size()));
        for (int k : {1, 2, 3, 5}) {
            SuggestionParams many = one;
            many.steps = k;
            for (auto kind : kAgentKinds) {
                Grid chained = g;
                for (int i = 0; i < k; ++i) chained = rollout_agent(agents.get(kind), chained, one);
                failures += rollout_agent(agents.get(kind), g, many) != chained;
            }
        }
    }
    return {failures == 0, fmt("100 grids x k in {1,2,3,5} x 3 agents, %d mismatches", failures)};
}

Outcome rewards_telescope() {
    const RewardWeights rw;
    SolutionCache cache;
    Rng rng(34);
    int failures = 0;
    double worst = 0.0;
    for (int ep = 0; ep < 1000; ++ep) {
        const AgentKind kind = kAgentKinds[static_cast<std::size_t>(ep % 3)];
        EnvState s = env_reset(mix_seed(34, static_cast<std::uint64_t>(ep)), 5, 5);
        const double initial = evaluate_score(s.grid, rw, &cache);
        double total = 0.0;
        for (bool done = false; !done;) {
            const auto actions = enumerate_actions(kind, s.grid);
            const auto r = env_step(s, kind, actions[rng.below(actions.size())], rw, &cache);
            total += r.reward;
            s = r.state;
            done = r.done;
        }
        const double gap = std::abs(total - (evaluate_score(s.grid, rw, &cache) - initial));
        worst = std::max(worst, gap);
        failures += gap != 0.0;
    }
    return {failures == 0, fmt("1000 random episodes, largest gap %g", worst)};
}

Outcome narrow_training_improves() {
    TrainConfig cfg;
    cfg.kind = AgentKind::Narrow;
    cfg.episodes = 50'000;
    cfg.seed = 1;
    const auto t0 = Clock::now();
    const auto result = train(cfg);
    const double secs = seconds_since(t0);
    const double before = result.report.playableFractionBefore;
    const double after = result.report.playableFractionAfter;
    return {after >= 2.0 * before && after > 0.0 && secs < 15 * 60,
            fmt("playable fraction %.3f -> %.3f over %d fixed seeds in %.0f s", before, after, kEvaluationSeedCount,
                secs)};
}

Outcome training_is_deterministic() {
    int failures = 0;
    for (auto kind : kAgentKinds) {
        TrainConfig cfg;
        cfg.kind = kind;
        cfg.episodes = 500;
        cfg.seed = 99;
        const auto a = train(cfg);
        const auto b = train(cfg);
        failures += !(a.policy == b.policy) || policy_to_json(a.policy) != policy_to_json(b.policy);
        failures += a.report.episodeReturns != b.report.episodeReturns;
    }
    return {failures == 0, fmt("three agents trained twice from one seed, %d differences", failures)};
}

std::filesystem::path fixture(const char* name) { return std::filesystem::path(RLBRUSH_FIXTURE_DIR) / name; }

Outcome interaction_summary() {
    const auto m = compute_metrics(replay_sessions(read_event_log(fixture("interaction_summary.ndjson"))));
    const bool ok = m.totalSessions == 75 && m.totalInteractions == 3165 && m.totalSuggestionsAccepted == 308 &&
                    std::abs(m.interactionsPerSession - 42.2) <= 0.05 &&
                    std::abs(m.suggestionsAcceptedPerSession - 4.11) <= 0.005 &&
                    std::abs(m.levelVersionsPerSession - 10.6) <= 0.05;
    return {ok, fmt("%zu sessions, %s interactions and %s accepts per session, %s versions per session",
                    m.totalSessions, format_sig(m.interactionsPerSession).c_str(),
                    format_sig(m.suggestionsAcceptedPerSession).c_str(), format_sig(m.levelVersionsPerSession).c_str())};
}

Outcome playability_split() {
    const auto t = playability_table(replay_sessions(read_event_log(fixture("playability.ndjson"))));
    const bool ok = t.usedAiPlayable == 9 && t.usedAiUnplayable == 2 && t.noAiPlayable == 8 && t.noAiUnplayable == 20;
    return {ok, fmt("used AI %d/%d, no AI %d/%d (playable/unplayable)", t.usedAiPlayable, t.usedAiUnplayable,
                    t.noAiPlayable, t.noAiUnplayable)};
}

Outcome pearson_is_exact() {
    Rng rng(35);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng.below(300);
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = static_cast<double>(rng.below(40)) + (i == 0);
            ys[i] = xs[i] * 0.25 + rng.uniform() * 30.0;
        }
        worst = std::max(worst, std::abs(pearson_correlation(xs, ys) - oracle::exact_pearson(xs, ys)));
    }
    return {worst <= 1e-12, fmt("100 random vectors, largest error %.3g; the published 0.279 needs the original "
                                "study data and is not reproduced",
                                worst)};
}

Outcome replay_is_bit_identical() {
    int failures = 0;
    const auto dir = std::filesystem::temp_directory_path() / "rlbrush_acceptance";
    std::filesystem::create_directories(dir);
    for (const auto& log : {fixtures::interaction_summary_log(), fixtures::playability_log()}) {
        const auto sessions = replay_sessions(log);
        std::vector<InteractionEvent> relogged;
        for (const auto& s : sessions) relogged.insert(relogged.end(), s.log().begin(), s.log().end());
        write_event_log(dir / "replay.ndjson", relogged);
        const auto again = replay_sessions(read_event_log(dir / "replay.ndjson"));
        failures += again.size() != sessions.size();
        for (std::size_t i = 0; i < std::min(again.size(), sessions.size()); ++i) {
            const auto& a = sessions[i];
            const auto& b = again[i];
            failures += !(a.current() == b.current() && a.undo_stack() == b.undo_stack() &&
                          a.redo_stack() == b.redo_stack() && a.accepted_suggestions() == b.accepted_suggestions() &&
                          a.log() == b.log());
        }
    }
    std::filesystem::remove_all(dir);
    return {failures == 0, fmt("both fixture logs replayed, written and replayed again, %d differences", failures)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"solver agrees with the exhaustive oracle", solver_matches_oracle},
        {"every returned solution replays to a win", solutions_replay},
        {"majority keeps exactly the entries two agents share", majority_vote_law},
        {"edit window is the Manhattan ball", window_is_manhattan_ball},
        {"n steps equal n chained single steps", steps_compose},
        {"episode rewards telescope exactly", rewards_telescope},
        {"narrow training at least doubles playability", narrow_training_improves},
        {"training is deterministic per seed", training_is_deterministic},
        {"interaction summary fixture", interaction_summary},
        {"playability by cohort fixture", playability_split},
        {"pearson matches exact arithmetic", pearson_is_exact},
        {"session replay is bit-identical", replay_is_bit_identical},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}
