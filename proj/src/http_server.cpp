#include <httplib.h>

#include "rlbrush/service.hpp"

namespace rlbrush {

using nlohmann::json;

namespace {

void reply(httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

json body_of(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    return json::parse(req.body, nullptr, /*allow_exceptions=*/false);
}

// Wraps a handler that takes the session id and a parsed body.
template <class Fn>
auto with_body(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        const auto body = body_of(req);
        if (body.is_discarded() || !body.is_object()) {
            reply(res, {400, {{"error", "FormatError"}, {"message", "request body must be a JSON object"}}});
            return;
        }
        reply(res, fn(req.path_params.at("id"), body));
    };
}

template <class Fn>
auto without_body(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) { reply(res, fn(req.path_params.at("id"))); };
}

} // namespace

std::unique_ptr<httplib::Server> make_http_server(Service& service) {
    auto server = std::make_unique<httplib::Server>();
    Service* s = &service;

    server->Post("/api/session", [s](const httplib::Request&, httplib::Response& res) {
        reply(res, s->create_session());
    });
    server->Get("/api/session/:id", without_body([s](const std::string& id) { return s->get_session(id); }));
    server->Post("/api/session/:id/edit",
                 with_body([s](const std::string& id, const json& b) { return s->edit(id, b); }));
    server->Post("/api/session/:id/accept",
                 with_body([s](const std::string& id, const json& b) { return s->accept(id, b); }));
    server->Post("/api/session/:id/params",
                 with_body([s](const std::string& id, const json& b) { return s->set_params(id, b); }));
    server->Post("/api/session/:id/undo", without_body([s](const std::string& id) { return s->undo(id); }));
    server->Post("/api/session/:id/redo", without_body([s](const std::string& id) { return s->redo(id); }));
    server->Post("/api/session/:id/solve", without_body([s](const std::string& id) { return s->solve(id); }));
    server->Get("/api/session/:id/export",
                without_body([s](const std::string& id) { return s->export_level(id); }));
    return server;
}

} // namespace rlbrush
