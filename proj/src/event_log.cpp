#include <map>
#include <sstream>

#include <json.hpp>

#include "rlbrush/session.hpp"

namespace rlbrush {

using json = nlohmann::ordered_json;

std::string event_to_json(const InteractionEvent& e) {
    json j;
    j["sessionId"] = e.sessionId;
    j["ts"] = e.ts;
    j["kind"] = to_string(e.kind);
    j["agent"] = e.agent ? json(*e.agent) : json(nullptr);
    j["grid"] = e.grid ? json(*e.grid) : json(nullptr);
    return j.dump();
}

InteractionEvent event_from_json(std::string_view line) {
    try {
        const auto j = json::parse(line);
        InteractionEvent e;
        e.sessionId = j.at("sessionId").get<std::string>();
        e.ts = j.at("ts").get<std::int64_t>();
        auto kind = event_kind_from_string(j.at("kind").get<std::string>());
        if (!kind) throw FormatError("unknown event kind");
        e.kind = *kind;
        if (const auto& a = j.at("agent"); !a.is_null()) e.agent = a.get<std::string>();
        if (const auto& g = j.at("grid"); !g.is_null()) e.grid = g.get<std::string>();
        return e;
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed event record: ") + ex.what());
    }
}

std::vector<InteractionEvent> read_event_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open event log " + path.string());
    std::vector<InteractionEvent> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(event_from_json(line));
    }
    return out;
}

void write_event_log(const std::filesystem::path& path, std::span<const InteractionEvent> events) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    for (const auto& e : events) out << event_to_json(e) << '\n';
}

std::vector<EditorSession> replay_sessions(std::span<const InteractionEvent> events) {
    std::vector<EditorSession> sessions;
    std::map<std::string, std::size_t> index;
    for (const auto& e : events) {
        auto it = index.find(e.sessionId);
        if (it == index.end()) {
            Grid initial = default_grid();
            if (e.kind == EventKind::SessionStart && e.grid) initial = parse_level(*e.grid);
            it = index.emplace(e.sessionId, sessions.size()).first;
            sessions.emplace_back(e.sessionId, std::move(initial));
        }
        try {
            sessions[it->second].record(e);
        } catch (const ClockError&) {
            // stored and flagged; replay continues
        }
    }
    return sessions;
}

EventLogWriter::EventLogWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::app) {
    if (!out_) throw FormatError("cannot open event log " + path.string());
}

void EventLogWriter::append(const InteractionEvent& e) {
    std::lock_guard lock(mutex_);
    out_ << event_to_json(e) << '\n';
    out_.flush();
}

} // namespace rlbrush
