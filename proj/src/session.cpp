#include "rlbrush/session.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace rlbrush {

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::ManualEdit: return "ManualEdit";
    case EventKind::SuggestionAccepted: return "SuggestionAccepted";
    case EventKind::Undo: return "Undo";
    case EventKind::Redo: return "Redo";
    case EventKind::StepParamChanged: return "StepParamChanged";
    case EventKind::RadiusParamChanged: return "RadiusParamChanged";
    case EventKind::SolveRequested: return "SolveRequested";
    case EventKind::Export: return "Export";
    case EventKind::SessionStart: return "SessionStart";
    case EventKind::SessionEnd: return "SessionEnd";
    }
    return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(EventKind::SessionEnd); ++i)
        if (to_string(static_cast<EventKind>(i)) == s) return static_cast<EventKind>(i);
    return std::nullopt;
}

bool is_interaction(EventKind k) {
    return k != EventKind::SessionStart && k != EventKind::SessionEnd;
}

Grid default_grid() { return Grid(5, 5); }

EditorSession::EditorSession(std::string sessionId, Grid initial)
    : id_(std::move(sessionId)), initial_(initial), current_(std::move(initial)) {}

EditorSession EditorSession::start(std::string sessionId, Grid initial, std::int64_t ts) {
    EditorSession s(sessionId, initial);
    s.record({std::move(sessionId), ts, EventKind::SessionStart, std::nullopt, serialize_level(initial)});
    return s;
}

void EditorSession::record(InteractionEvent e) {
    if (e.sessionId != id_) throw SessionError("event for session '" + e.sessionId + "' sent to '" + id_ + "'");
    const bool late = !log_.empty() && e.ts < log_.back().ts;
    e.clockViolation = late;
    apply(e);
    log_.push_back(std::move(e));
    if (late) throw ClockError("event timestamp goes backwards in session " + id_);
}

void EditorSession::apply(InteractionEvent& e) {
    auto require_grid = [&]() -> Grid {
        if (!e.grid) throw FormatError(std::string(to_string(e.kind)) + " event carries no grid");
        return parse_level(*e.grid);
    };
    switch (e.kind) {
    case EventKind::SessionStart:
        if (log_.empty() && e.grid) {
            initial_ = require_grid();
            current_ = initial_;
        }
        break;
    case EventKind::ManualEdit:
    case EventKind::SuggestionAccepted: {
        Grid next = require_grid();
        undo_.push_back(current_);
        redo_.clear();
        current_ = std::move(next);
        if (e.kind == EventKind::SuggestionAccepted) ++accepted_;
        break;
    }
    case EventKind::Undo:
        if (!undo_.empty()) {
            redo_.push_back(current_);
            current_ = undo_.back();
            undo_.pop_back();
        }
        e.grid = serialize_level(current_);
        break;
    case EventKind::Redo:
        if (!redo_.empty()) {
            undo_.push_back(current_);
            current_ = redo_.back();
            redo_.pop_back();
        }
        e.grid = serialize_level(current_);
        break;
    default: break;
    }
}

const InteractionEvent& EditorSession::edit(const Grid& next, std::int64_t ts) {
    record({id_, ts, EventKind::ManualEdit, std::nullopt, serialize_level(next)});
    return log_.back();
}

const InteractionEvent& EditorSession::accept(const Grid& next, std::string agent, std::int64_t ts) {
    record({id_, ts, EventKind::SuggestionAccepted, std::move(agent), serialize_level(next)});
    return log_.back();
}

const InteractionEvent& EditorSession::undo(std::int64_t ts) {
    record({id_, ts, EventKind::Undo, std::nullopt, std::nullopt});
    return log_.back();
}

const InteractionEvent& EditorSession::redo(std::int64_t ts) {
    record({id_, ts, EventKind::Redo, std::nullopt, std::nullopt});
    return log_.back();
}

const InteractionEvent& EditorSession::note(EventKind kind, std::int64_t ts) {
    record({id_, ts, kind, std::nullopt, std::nullopt});
    return log_.back();
}

std::size_t level_versions(const EditorSession& s) {
    std::set<std::string> seen{serialize_level(s.initial())};
    for (const auto& e : s.log())
        if (e.grid) seen.insert(*e.grid);
    return seen.size();
}

SessionMetrics compute_metrics(std::span<const EditorSession> sessions) {
    if (sessions.empty()) throw EmptyError("no sessions to summarise");
    SessionMetrics m;
    m.totalSessions = sessions.size();
    std::size_t versions = 0;
    for (const auto& s : sessions) {
        m.totalInteractions += static_cast<std::size_t>(
            std::count_if(s.log().begin(), s.log().end(), [](const auto& e) { return is_interaction(e.kind); }));
        m.totalSuggestionsAccepted += static_cast<std::size_t>(s.accepted_suggestions());
        versions += level_versions(s);
    }
    const double n = static_cast<double>(m.totalSessions);
    m.interactionsPerSession = static_cast<double>(m.totalInteractions) / n;
    m.suggestionsAcceptedPerSession = static_cast<double>(m.totalSuggestionsAccepted) / n;
    m.levelVersionsPerSession = static_cast<double>(versions) / n;
    return m;
}

double round_sig(double x, int figures) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const double magnitude = std::floor(std::log10(std::fabs(x)));
    const double scale = std::pow(10.0, figures - 1 - magnitude);
    return std::round(x * scale) / scale;
}

std::string format_sig(double x, int figures) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", figures, x);
    return buf;
}

PlayabilityTable playability_table(std::span<const EditorSession> sessions, const SolveLimits& limits) {
    PlayabilityTable t;
    for (const auto& s : sessions) {
        const bool usedAi = s.accepted_suggestions() >= 1;
        const bool playable = solution_length(s.current(), limits).has_value();
        if (usedAi) (playable ? t.usedAiPlayable : t.usedAiUnplayable)++;
        else (playable ? t.noAiPlayable : t.noAiUnplayable)++;
    }
    return t;
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DimensionError("correlation needs equal-length samples");
    if (xs.size() < 2) throw UndefinedError("correlation needs at least two samples");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedError("correlation undefined for zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<std::size_t> session_difficulty(const EditorSession& s, const SolveLimits& limits) {
    std::set<std::string> versions{serialize_level(s.initial())};
    for (const auto& e : s.log())
        if (e.grid) versions.insert(*e.grid);
    std::optional<std::size_t> best;
    for (const auto& text : versions) {
        if (auto len = solution_length(parse_level(text), limits); len && (!best || *len > *best)) best = len;
    }
    return best;
}

} // namespace rlbrush
