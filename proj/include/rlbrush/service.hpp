#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "rlbrush/session.hpp"
#include "rlbrush/suggest.hpp"

namespace httplib {
class Server;
}

namespace rlbrush {

struct ServiceConfig {
    std::string listenAddress = "127.0.0.1";
    int port = 8080;
    std::filesystem::path modelDir;
    std::filesystem::path eventLogPath = "events.ndjson";
    SolveLimits solveLimits{};
};

ServiceConfig load_service_config(const std::filesystem::path& path);

// Reads narrow.json, turtle.json and wide.json from dir.
AgentSet load_agents(const std::filesystem::path& dir);

nlohmann::json grid_to_json(const Grid& g);
Grid grid_from_json(const nlohmann::json& j);
nlohmann::json diff_to_json(const Diff& d);

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

// Session host behind the HTTP API. Requests for one session are serialized;
// different sessions proceed concurrently. Every mutating call appends one
// event to the log before it returns, and every response carries suggestions
// regenerated for the grid in that same response.
class Service {
  public:
    // Replays an existing event log so sessions survive restarts.
    Service(ServiceConfig cfg, AgentSet agents);
    ~Service();

    ServiceResponse create_session();
    ServiceResponse edit(const std::string& id, const nlohmann::json& body);
    ServiceResponse accept(const std::string& id, const nlohmann::json& body);
    ServiceResponse set_params(const std::string& id, const nlohmann::json& body);
    ServiceResponse undo(const std::string& id);
    ServiceResponse redo(const std::string& id);
    ServiceResponse solve(const std::string& id);
    ServiceResponse export_level(const std::string& id);
    ServiceResponse get_session(const std::string& id);

    std::size_t session_count() const;
    const ServiceConfig& config() const { return cfg_; }

  private:
    struct Live;

    std::shared_ptr<Live> find(const std::string& id) const;
    std::int64_t now_ms(const Live& live) const;
    void regenerate(Live& live) const;
    void log(const InteractionEvent& e);
    nlohmann::json state_json(const Live& live) const;
    std::string fresh_id();

    template <class Fn>
    ServiceResponse with_session(const std::string& id, Fn&& fn);

    ServiceConfig cfg_;
    AgentSet agents_;
    mutable std::shared_mutex sessionsMutex_;
    std::map<std::string, std::shared_ptr<Live>> sessions_;
    std::unique_ptr<EventLogWriter> writer_;
    std::atomic<std::uint64_t> counter_{0};
};

// Routes the HTTP API onto a Service. The caller owns the returned server
// and calls listen()/bind_to_port() on it.
std::unique_ptr<httplib::Server> make_http_server(Service& service);

} // namespace rlbrush
