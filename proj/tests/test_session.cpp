#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fixture_logs.hpp"
#include "oracles.hpp"
#include "rlbrush/rng.hpp"
#include "rlbrush/session.hpp"

using namespace rlbrush;

namespace {

const Grid kCorridor = parse_level("#####\n#@$.#\n#---#\n#---#\n#####\n");

std::filesystem::path fixture(const char* name) { return std::filesystem::path(RLBRUSH_FIXTURE_DIR) / name; }

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "rlbrush_test_session";
    std::filesystem::create_directories(dir);
    return dir / name;
}

EditorSession fresh(const std::string& id = "s") { return EditorSession::start(id, default_grid(), 1000); }

// Random edits, accepts, undos and redos on one session.
EditorSession random_session(Rng& rng, const std::string& id, int events) {
    EditorSession s = fresh(id);
    std::int64_t ts = 1000;
    for (int i = 0; i < events; ++i) {
        ts += static_cast<std::int64_t>(rng.below(3000));
        const Position p = s.current().position(rng.below(s.current().size()));
        const auto tile = static_cast<PaletteTile>(rng.below(kPaletteSize));
        switch (rng.below(6)) {
        case 0: s.edit(apply_palette(s.current(), p, tile), ts); break;
        case 1: s.accept(apply_palette(s.current(), p, tile), "wide", ts); break;
        case 2: s.undo(ts); break;
        case 3: s.redo(ts); break;
        case 4: s.note(EventKind::StepParamChanged, ts); break;
        default: s.edit(apply_palette(s.current(), p, tile), ts); break;
        }
    }
    return s;
}

} // namespace

TEST_CASE("edits feed the undo stack and clear redo") {
    EditorSession s = fresh();
    const Grid a = apply_palette(s.current(), {1, 1}, PaletteTile::Wall);
    s.edit(a, 2000);
    CHECK(s.undo_stack().size() == 1);
    CHECK(s.current() == a);
    s.undo(2100);
    CHECK(s.current() == default_grid());
    CHECK(s.redo_stack().size() == 1);
    s.redo(2200);
    CHECK(s.current() == a);
    s.undo(2300);
    s.edit(apply_palette(s.current(), {0, 0}, PaletteTile::Box), 2400);
    CHECK(s.redo_stack().empty());
}

TEST_CASE("undo and redo on empty stacks are logged no-ops") {
    EditorSession s = fresh();
    s.undo(1100);
    s.redo(1200);
    CHECK(s.current() == default_grid());
    CHECK(s.log().size() == 3);
    CHECK(s.log()[1].kind == EventKind::Undo);
    CHECK(s.log()[1].grid == serialize_level(default_grid()));
}

TEST_CASE("accepting counts suggestions and undo does not uncount them") {
    EditorSession s = fresh();
    s.accept(kCorridor, "majority", 1500);
    CHECK(s.accepted_suggestions() == 1);
    s.undo(1600);
    CHECK(s.accepted_suggestions() == 1);
    CHECK(s.log().back().grid == serialize_level(default_grid()));
}

TEST_CASE("events for another session are rejected") {
    EditorSession s = fresh("a");
    CHECK_THROWS_AS(s.record({"b", 2000, EventKind::Undo, std::nullopt, std::nullopt}), SessionError);
    CHECK(s.log().size() == 1);
}

TEST_CASE("backwards timestamps are stored but flagged") {
    EditorSession s = fresh();
    s.note(EventKind::SolveRequested, 5000);
    CHECK_THROWS_AS(s.edit(kCorridor, 4000), ClockError);
    CHECK(s.log().size() == 3);
    CHECK(s.log().back().clockViolation);
    CHECK(s.current() == kCorridor);
}

TEST_CASE("level versions count distinct grids") {
    CHECK(level_versions(fresh()) == 1);

    EditorSession flip = fresh();
    flip.edit(kCorridor, 2000);
    std::int64_t ts = 2000;
    for (int i = 0; i < 50; ++i) {
        flip.undo(++ts);
        flip.redo(++ts);
    }
    CHECK(level_versions(flip) == 2);
    CHECK(std::count_if(flip.log().begin(), flip.log().end(), [](const auto& e) { return is_interaction(e.kind); }) ==
          101);

    EditorSession three = fresh();
    Grid g = default_grid();
    for (int i = 0; i < 3; ++i) {
        g = apply_palette(g, {i, 0}, PaletteTile::Wall);
        three.edit(g, 2000 + i);
    }
    CHECK(level_versions(three) == 4);
}

TEST_CASE("level versions never exceed one plus the mutating events") {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        const EditorSession s = random_session(rng, "r", 60);
        const auto mutating = std::count_if(s.log().begin(), s.log().end(), [](const auto& e) {
            return e.kind == EventKind::ManualEdit || e.kind == EventKind::SuggestionAccepted;
        });
        REQUIRE(level_versions(s) <= static_cast<std::size_t>(1 + mutating));
    }
}

TEST_CASE("metrics divide totals by the session count") {
    CHECK_THROWS_AS(compute_metrics(std::vector<EditorSession>{}), EmptyError);
    const std::vector<EditorSession> one{fresh()};
    const auto m = compute_metrics(one);
    CHECK(m.totalSessions == 1);
    CHECK(m.totalInteractions == 0);
    CHECK(m.interactionsPerSession == 0.0);
    CHECK(m.levelVersionsPerSession == 1.0);
}

TEST_CASE("metrics are permutation invariant") {
    Rng rng(13);
    std::vector<EditorSession> sessions;
    for (int i = 0; i < 12; ++i) sessions.push_back(random_session(rng, "p" + std::to_string(i), 30));
    const auto a = compute_metrics(sessions);
    std::reverse(sessions.begin(), sessions.end());
    const auto b = compute_metrics(sessions);
    CHECK(a.totalInteractions == b.totalInteractions);
    CHECK(a.levelVersionsPerSession == b.levelVersionsPerSession);
    CHECK(a.suggestionsAcceptedPerSession == b.suggestionsAcceptedPerSession);
}

TEST_CASE("interaction summary fixture") {
    const auto sessions = replay_sessions(read_event_log(fixture("interaction_summary.ndjson")));
    const auto m = compute_metrics(sessions);
    CHECK(m.totalSessions == 75);
    CHECK(m.totalInteractions == 3165);
    CHECK(m.totalSuggestionsAccepted == 308);
    CHECK(round_sig(m.interactionsPerSession) == 42.2);
    CHECK(round_sig(m.suggestionsAcceptedPerSession) == 4.11);
    CHECK(round_sig(m.levelVersionsPerSession) == 10.6);
    CHECK(format_sig(m.interactionsPerSession) == "42.2");
    CHECK(format_sig(m.suggestionsAcceptedPerSession) == "4.11");
}

TEST_CASE("playability fixture") {
    const auto sessions = replay_sessions(read_event_log(fixture("playability.ndjson")));
    const auto t = playability_table(sessions);
    CHECK(t.usedAiPlayable == 9);
    CHECK(t.noAiPlayable == 8);
    CHECK(t.usedAiUnplayable == 2);
    CHECK(t.noAiUnplayable == 20);
    CHECK(t.total() == 39);
    CHECK(t.playable() + t.unplayable() == t.used_ai() + t.no_ai());
}

TEST_CASE("empty sessions land in the no-AI unplayable cell") {
    const std::vector<EditorSession> sessions{fresh("a"), fresh("b")};
    const auto t = playability_table(sessions);
    CHECK(t.noAiUnplayable == 2);
    CHECK(t.total() == 2);
}

TEST_CASE("the committed fixtures match the generator") {
    CHECK(read_event_log(fixture("interaction_summary.ndjson")) == fixtures::interaction_summary_log());
    CHECK(read_event_log(fixture("playability.ndjson")) == fixtures::playability_log());
}

TEST_CASE("rounding to significant figures") {
    CHECK(round_sig(3165.0 / 75.0) == 42.2);
    CHECK(round_sig(308.0 / 75.0) == 4.11);
    CHECK(round_sig(0.0) == 0.0);
    CHECK(round_sig(-0.012345) == -0.0123);
    CHECK(format_sig(795.0 / 75.0) == "10.6");
}

TEST_CASE("pearson on small cases") {
    const std::vector<double> up{1, 2, 3}, down{3, 2, 1};
    CHECK(pearson_correlation(up, up) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson_correlation(up, down) == doctest::Approx(-1.0).epsilon(1e-15));
    const std::vector<double> xs{1, 2, 4, 5}, ys{1, 3, 2, 6};
    // By hand: both means are 3; sxy = 9, sxx = 10, syy = 14.
    CHECK(std::abs(pearson_correlation(xs, ys) - 9.0 / std::sqrt(140.0)) < 1e-12);
    CHECK(std::abs(pearson_correlation(xs, ys) - oracle::exact_pearson(xs, ys)) < 1e-12);
}

TEST_CASE("pearson error cases") {
    const std::vector<double> flat{2, 2, 2}, up{1, 2, 3};
    CHECK_THROWS_AS(pearson_correlation(flat, up), UndefinedError);
    CHECK_THROWS_AS(pearson_correlation(up, std::vector<double>{1, 2}), DimensionError);
    CHECK_THROWS_AS(pearson_correlation(std::vector<double>{1}, std::vector<double>{1}), UndefinedError);
}

TEST_CASE("pearson agrees with exact arithmetic on random vectors") {
    Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(200);
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = static_cast<double>(rng.below(30));
            ys[i] = xs[i] * 0.3 + rng.uniform() * 20.0;
        }
        if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) continue;
        REQUIRE(std::abs(pearson_correlation(xs, ys) - oracle::exact_pearson(xs, ys)) < 1e-12);
    }
}

TEST_CASE("session difficulty is the longest solvable version") {
    EditorSession s = fresh();
    CHECK_FALSE(session_difficulty(s).has_value());
    s.edit(parse_level("#####\n#$--#\n#-@.#\n#---#\n#####\n"), 1100);
    CHECK_FALSE(session_difficulty(s).has_value());
    s.edit(kCorridor, 1200);
    CHECK(session_difficulty(s) == 1u);
    s.edit(parse_level("#####\n#@--#\n#$$-#\n#..-#\n#####\n"), 1300);
    CHECK(session_difficulty(s) == solution_length(s.current()));
    s.edit(kCorridor, 1400);
    CHECK(session_difficulty(s) == solution_length(parse_level("#####\n#@--#\n#$$-#\n#..-#\n#####\n")));
}

TEST_CASE("event json uses the fixed field order") {
    const InteractionEvent e{"abc", 42, EventKind::SuggestionAccepted, "wide", "---\n-@-\n---\n"};
    CHECK(event_to_json(e) ==
          R"({"sessionId":"abc","ts":42,"kind":"SuggestionAccepted","agent":"wide","grid":"---\n-@-\n---\n"})");
    CHECK(event_from_json(event_to_json(e)) == e);
    const InteractionEvent bare{"abc", 43, EventKind::Export, std::nullopt, std::nullopt};
    CHECK(event_to_json(bare) == R"({"sessionId":"abc","ts":43,"kind":"Export","agent":null,"grid":null})");
    CHECK_THROWS_AS(event_from_json("{\"sessionId\":1}"), FormatError);
    CHECK_THROWS_AS(event_from_json("not json"), FormatError);
}

TEST_CASE("replay reproduces grids, stacks and counters exactly") {
    Rng rng(15);
    std::vector<EditorSession> originals;
    std::vector<InteractionEvent> log;
    for (int i = 0; i < 40; ++i) {
        originals.push_back(random_session(rng, "x" + std::to_string(i), 80));
        log.insert(log.end(), originals.back().log().begin(), originals.back().log().end());
    }
    const auto path = scratch("replay.ndjson");
    write_event_log(path, log);
    const auto replayed = replay_sessions(read_event_log(path));
    REQUIRE(replayed.size() == originals.size());
    for (std::size_t i = 0; i < originals.size(); ++i) {
        const auto& a = originals[i];
        const auto& b = replayed[i];
        REQUIRE(a.id() == b.id());
        REQUIRE(a.current() == b.current());
        REQUIRE(a.undo_stack() == b.undo_stack());
        REQUIRE(a.redo_stack() == b.redo_stack());
        REQUIRE(a.accepted_suggestions() == b.accepted_suggestions());
        REQUIRE(a.log() == b.log());
        REQUIRE(level_versions(a) == level_versions(b));
    }
}

TEST_CASE("replay keeps sessions with clock violations") {
    std::vector<InteractionEvent> log{
        {"c", 100, EventKind::SessionStart, std::nullopt, serialize_level(default_grid())},
        {"c", 300, EventKind::ManualEdit, std::nullopt, serialize_level(kCorridor)},
        {"c", 200, EventKind::Undo, std::nullopt, std::nullopt},
    };
    const auto sessions = replay_sessions(log);
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].current() == default_grid());
    CHECK(sessions[0].log().back().clockViolation);
}

TEST_CASE("the log writer appends whole lines") {
    const auto path = scratch("writer.ndjson");
    std::filesystem::remove(path);
    {
        EventLogWriter w(path);
        const EditorSession s = fresh("w");
        for (const auto& e : s.log()) w.append(e);
        w.append({"w", 2000, EventKind::Export, std::nullopt, std::nullopt});
    }
    {
        EventLogWriter w(path);
        w.append({"w", 3000, EventKind::SessionEnd, std::nullopt, std::nullopt});
    }
    const auto events = read_event_log(path);
    REQUIRE(events.size() == 3);
    CHECK(events[2].kind == EventKind::SessionEnd);
}
