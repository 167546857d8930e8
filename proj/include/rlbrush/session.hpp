#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlbrush/level.hpp"
#include "rlbrush/solver.hpp"
#include "rlbrush/suggest.hpp"

namespace rlbrush {

enum class EventKind {
    ManualEdit,
    SuggestionAccepted,
    Undo,
    Redo,
    StepParamChanged,
    RadiusParamChanged,
    SolveRequested,
    Export,
    SessionStart,
    SessionEnd,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

// Everything except SessionStart and SessionEnd is a user interaction.
bool is_interaction(EventKind k);

struct InteractionEvent {
    std::string sessionId;
    std::int64_t ts = 0; // ms since epoch
    EventKind kind = EventKind::SessionStart;
    std::optional<std::string> agent;
    std::optional<std::string> grid; // serialized level after the event
    bool clockViolation = false;     // set on ingest, not persisted

    friend bool operator==(const InteractionEvent& a, const InteractionEvent& b) {
        return a.sessionId == b.sessionId && a.ts == b.ts && a.kind == b.kind && a.agent == b.agent &&
               a.grid == b.grid;
    }
};

// Editor state rebuilt purely from its event history: feeding the same
// events to a fresh session reproduces grid, stacks and counters.
class EditorSession {
  public:
    EditorSession(std::string sessionId, Grid initial);

    // Fresh session with a logged SessionStart carrying the initial grid.
    static EditorSession start(std::string sessionId, Grid initial, std::int64_t ts);

    const std::string& id() const { return id_; }
    const Grid& current() const { return current_; }
    const Grid& initial() const { return initial_; }
    const std::vector<Grid>& undo_stack() const { return undo_; }
    const std::vector<Grid>& redo_stack() const { return redo_; }
    const std::vector<InteractionEvent>& log() const { return log_; }
    int accepted_suggestions() const { return accepted_; }
    std::int64_t last_ts() const { return log_.empty() ? 0 : log_.back().ts; }

    SuggestionParams params;

    // Appends and applies the event. Mismatched session ids are rejected with
    // SessionError. A timestamp older than the previous one is still stored
    // (flagged) and then reported with ClockError.
    void record(InteractionEvent e);

    // Convenience wrappers that build the event (with gridAfter) and record it.
    const InteractionEvent& edit(const Grid& next, std::int64_t ts);
    const InteractionEvent& accept(const Grid& next, std::string agent, std::int64_t ts);
    const InteractionEvent& undo(std::int64_t ts);
    const InteractionEvent& redo(std::int64_t ts);
    const InteractionEvent& note(EventKind kind, std::int64_t ts);

  private:
    void apply(InteractionEvent& e);

    std::string id_;
    Grid initial_;
    Grid current_;
    std::vector<Grid> undo_;
    std::vector<Grid> redo_;
    std::vector<InteractionEvent> log_;
    int accepted_ = 0;
};

// Distinct serialized grids seen in the session, the initial grid included.
std::size_t level_versions(const EditorSession& s);

struct SessionMetrics {
    std::size_t totalSessions = 0;
    std::size_t totalInteractions = 0;
    std::size_t totalSuggestionsAccepted = 0;
    double levelVersionsPerSession = 0.0;
    double suggestionsAcceptedPerSession = 0.0;
    double interactionsPerSession = 0.0;
};

SessionMetrics compute_metrics(std::span<const EditorSession> sessions);

// Rounds to the given number of significant figures.
double round_sig(double x, int figures = 3);
// Formats with exactly `figures` significant figures, e.g. 4.11, 42.2, 10.6.
std::string format_sig(double x, int figures = 3);

struct PlayabilityTable {
    int usedAiPlayable = 0;
    int usedAiUnplayable = 0;
    int noAiPlayable = 0;
    int noAiUnplayable = 0;

    int used_ai() const { return usedAiPlayable + usedAiUnplayable; }
    int no_ai() const { return noAiPlayable + noAiUnplayable; }
    int playable() const { return usedAiPlayable + noAiPlayable; }
    int unplayable() const { return usedAiUnplayable + noAiUnplayable; }
    int total() const { return used_ai() + no_ai(); }
};

PlayabilityTable playability_table(std::span<const EditorSession> sessions,
                                   const SolveLimits& limits = {});

double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

// Longest solution among the session's level versions.
std::optional<std::size_t> session_difficulty(const EditorSession& s, const SolveLimits& limits = {});

// Newline-delimited JSON event log: sessionId, ts, kind, agent, grid.
std::string event_to_json(const InteractionEvent& e);
InteractionEvent event_from_json(std::string_view line);
std::vector<InteractionEvent> read_event_log(const std::filesystem::path& path);
void write_event_log(const std::filesystem::path& path, std::span<const InteractionEvent> events);

// Groups events by session in order of first appearance and replays each
// group. A group that does not open with a SessionStart grid starts from the
// default 5x5 floor.
std::vector<EditorSession> replay_sessions(std::span<const InteractionEvent> events);

Grid default_grid();

// Single appender; every append is flushed before returning.
class EventLogWriter {
  public:
    explicit EventLogWriter(const std::filesystem::path& path);
    void append(const InteractionEvent& e);

  private:
    std::mutex mutex_;
    std::ofstream out_;
};

} // namespace rlbrush
