#include "rlbrush/service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

namespace rlbrush {

using nlohmann::json;

ServiceConfig load_service_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    ServiceConfig cfg;
    try {
        const auto j = json::parse(in);
        cfg.listenAddress = j.value("listenAddress", cfg.listenAddress);
        cfg.port = j.value("port", cfg.port);
        if (!j.contains("modelDir")) throw ConfigError("config needs modelDir");
        const auto base = path.parent_path();
        auto resolve = [&](const std::string& p) {
            std::filesystem::path fp(p);
            return fp.is_absolute() ? fp : base / fp;
        };
        cfg.modelDir = resolve(j.at("modelDir").get<std::string>());
        cfg.eventLogPath = resolve(j.value("eventLogPath", std::string("events.ndjson")));
        if (j.contains("solveLimits")) {
            const auto& l = j.at("solveLimits");
            cfg.solveLimits.maxStates = l.value("maxStates", cfg.solveLimits.maxStates);
            cfg.solveLimits.maxMillis = l.value("maxMillis", cfg.solveLimits.maxMillis);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

AgentSet load_agents(const std::filesystem::path& dir) {
    auto load = [&](AgentKind k) {
        const auto path = dir / (std::string(to_string(k)) + ".json");
        if (!std::filesystem::exists(path)) throw ConfigError("missing policy file " + path.string());
        Policy p = load_policy(path);
        if (p.kind != k) throw ConfigError(path.string() + " holds a " + std::string(to_string(p.kind)) + " policy");
        return p;
    };
    return {load(AgentKind::Narrow), load(AgentKind::Turtle), load(AgentKind::Wide)};
}

json grid_to_json(const Grid& g) {
    json cells = json::array();
    for (const auto& c : g.cells())
        cells.push_back({{"terrain", to_string(c.terrain)}, {"occupant", to_string(c.occupant)}});
    return {{"width", g.width()}, {"height", g.height()}, {"cells", std::move(cells)}};
}

namespace {

json cell_json(const Cell& c) {
    return {{"terrain", to_string(c.terrain)}, {"occupant", to_string(c.occupant)}};
}

Cell cell_from_json(const json& j) {
    auto t = terrain_from_string(j.at("terrain").get<std::string>());
    auto o = occupant_from_string(j.at("occupant").get<std::string>());
    if (!t || !o) throw FormatError("unknown terrain or occupant");
    return {*t, *o};
}

json error_body(const std::string& kind, const std::string& message) {
    return {{"error", kind}, {"message", message}};
}

ServiceResponse error_response(const Error& e) {
    const std::string kind = e.kind();
    int status = 400;
    if (kind == "SessionError") status = 404;
    else if (kind == "StaleDiffError") status = 409;
    auto body = error_body(kind, e.what());
    if (status == 409) body["refresh"] = true;
    return {status, std::move(body)};
}

Position position_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("position must be an object {x, y}");
    return {j.at("x").get<int>(), j.at("y").get<int>()};
}

} // namespace

Grid grid_from_json(const json& j) {
    try {
        Grid g(j.at("width").get<int>(), j.at("height").get<int>());
        const auto& cells = j.at("cells");
        if (!cells.is_array() || cells.size() != g.size()) throw FormatError("cell array has the wrong length");
        for (std::size_t i = 0; i < g.size(); ++i) g.set(g.position(i), cell_from_json(cells[i]));
        return g;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed grid: ") + e.what());
    }
}

json diff_to_json(const Diff& d) {
    json out = json::array();
    for (const auto& e : d.entries)
        out.push_back({{"pos", {{"x", e.pos.x}, {"y", e.pos.y}}}, {"before", cell_json(e.before)}, {"after", cell_json(e.after)}});
    return out;
}

struct Service::Live {
    explicit Live(EditorSession s) : session(std::move(s)) {}

    std::mutex mutex;
    EditorSession session;
    std::vector<Suggestion> suggestions;
    std::uint64_t revision = 0;
    std::optional<Position> lastClicked;
};

Service::Service(ServiceConfig cfg, AgentSet agents) : cfg_(std::move(cfg)), agents_(std::move(agents)) {
    if (std::filesystem::exists(cfg_.eventLogPath)) {
        const auto events = read_event_log(cfg_.eventLogPath);
        for (auto& s : replay_sessions(events)) {
            auto live = std::make_shared<Live>(std::move(s));
            regenerate(*live);
            sessions_.emplace(live->session.id(), std::move(live));
        }
    }
    writer_ = std::make_unique<EventLogWriter>(cfg_.eventLogPath);
}

Service::~Service() = default;

std::size_t Service::session_count() const {
    std::shared_lock lock(sessionsMutex_);
    return sessions_.size();
}

std::shared_ptr<Service::Live> Service::find(const std::string& id) const {
    std::shared_lock lock(sessionsMutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionError("unknown session " + id);
    return it->second;
}

std::int64_t Service::now_ms(const Live& live) const {
    const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    return std::max<std::int64_t>(now, live.session.last_ts());
}

void Service::regenerate(Live& live) const {
    SuggestionParams params = live.session.params;
    params.pivot = live.lastClicked;
    live.suggestions = generate_suggestions(live.session.current(), params, agents_);
    ++live.revision;
}

void Service::log(const InteractionEvent& e) { writer_->append(e); }

json Service::state_json(const Live& live) const {
    const auto& s = live.session;
    const Position pivot = resolve_pivot(s.current(), live.lastClicked);
    json suggestions = json::array();
    for (const auto& sug : live.suggestions)
        suggestions.push_back({{"agent", sug.agentName}, {"grid", grid_to_json(sug.resultGrid)}, {"diff", diff_to_json(sug.diff)}});
    return {
        {"sessionId", s.id()},
        {"revision", live.revision},
        {"grid", grid_to_json(s.current())},
        {"params", {{"steps", s.params.steps}, {"radius", s.params.toolRadius}, {"pivot", {{"x", pivot.x}, {"y", pivot.y}}}}},
        {"canUndo", !s.undo_stack().empty()},
        {"canRedo", !s.redo_stack().empty()},
        {"suggestions", std::move(suggestions)},
    };
}

std::string Service::fresh_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[40];
    std::snprintf(buf, sizeof buf, "s-%016llx-%llu", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(counter_.fetch_add(1)));
    return buf;
}

template <class Fn>
ServiceResponse Service::with_session(const std::string& id, Fn&& fn) {
    try {
        auto live = find(id);
        std::lock_guard lock(live->mutex);
        return fn(*live);
    } catch (const Error& e) {
        return error_response(e);
    } catch (const json::exception& e) {
        return {400, error_body("FormatError", e.what())};
    }
}

ServiceResponse Service::create_session() {
    std::shared_ptr<Live> live;
    {
        std::unique_lock lock(sessionsMutex_);
        std::string id;
        do id = fresh_id();
        while (sessions_.count(id));
        const auto ts = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
        live = std::make_shared<Live>(EditorSession::start(id, default_grid(), ts));
        sessions_.emplace(id, live);
    }
    std::lock_guard lock(live->mutex);
    log(live->session.log().back());
    regenerate(*live);
    return {200, state_json(*live)};
}

ServiceResponse Service::edit(const std::string& id, const json& body) {
    return with_session(id, [&](Live& live) -> ServiceResponse {
        const Position pos = position_from_json(body.at("pos"));
        auto tile = palette_from_string(body.at("tile").get<std::string>());
        if (!tile) throw FormatError("unknown tile " + body.at("tile").dump());
        Grid next = apply_palette(live.session.current(), pos, *tile);
        log(live.session.edit(next, now_ms(live)));
        live.lastClicked = pos;
        regenerate(live);
        return {200, state_json(live)};
    });
}

ServiceResponse Service::accept(const std::string& id, const json& body) {
    return with_session(id, [&](Live& live) -> ServiceResponse {
        const int index = body.at("suggestionIndex").get<int>();
        if (index < 0 || index >= static_cast<int>(live.suggestions.size()))
            throw FormatError("suggestionIndex must be in 0..3");
        if (body.contains("revision") && body.at("revision").get<std::uint64_t>() != live.revision)
            throw StaleDiffError("suggestions were regenerated since revision " + body.at("revision").dump());
        const auto& sug = live.suggestions[static_cast<std::size_t>(index)];
        Grid next = apply_diff(live.session.current(), sug.diff);
        log(live.session.accept(next, sug.agentName, now_ms(live)));
        live.lastClicked.reset();
        regenerate(live);
        return {200, state_json(live)};
    });
}

ServiceResponse Service::set_params(const std::string& id, const json& body) {
    return with_session(id, [&](Live& live) -> ServiceResponse {
        const bool hasSteps = body.contains("steps");
        const bool hasRadius = body.contains("radius");
        if (!hasSteps && !hasRadius) throw FormatError("expected steps and/or radius");
        if (hasSteps) live.session.params.steps = std::clamp(body.at("steps").get<int>(), 1, kMaxSteps);
        if (hasRadius) live.session.params.toolRadius = std::clamp(body.at("radius").get<int>(), 1, kMaxToolRadius);
        log(live.session.note(hasSteps ? EventKind::StepParamChanged : EventKind::RadiusParamChanged, now_ms(live)));
        regenerate(live);
        return {200, state_json(live)};
    });
}

ServiceResponse Service::undo(const std::string& id) {
    return with_session(id, [&](Live& live) -> ServiceResponse {
        log(live.session.undo(now_ms(live)));
        regenerate(live);
        return {200, state_json(live)};
    });
}

ServiceResponse Service::redo(const std::string& id) {
    return with_session(id, [&](Live& live) -> ServiceResponse {
        log(live.session.redo(now_ms(live)));
        regenerate(live);
        return {200, state_json(live)};
    });
}

ServiceResponse Service::solve(const std::string& id) {
    return with_session(id, [&](Live& live) -> ServiceResponse {
        log(live.session.note(EventKind::SolveRequested, now_ms(live)));
        const auto result = solve_bfs(live.session.current(), cfg_.solveLimits);
        json body{{"playable", result.status == SolveStatus::Solved}, {"status", to_string(result.status)}};
        if (result.solution) {
            body["solutionLength"] = result.solution->length();
            std::string moves;
            for (auto d : result.solution->moves) moves.push_back(direction_letter(d));
            body["moves"] = moves;
        } else {
            body["solutionLength"] = nullptr;
        }
        return {200, std::move(body)};
    });
}

ServiceResponse Service::export_level(const std::string& id) {
    return with_session(id, [&](Live& live) -> ServiceResponse {
        log(live.session.note(EventKind::Export, now_ms(live)));
        return {200, {{"level", serialize_level(live.session.current())}}};
    });
}

ServiceResponse Service::get_session(const std::string& id) {
    return with_session(id, [&](Live& live) -> ServiceResponse { return {200, state_json(live)}; });
}

} // namespace rlbrush
