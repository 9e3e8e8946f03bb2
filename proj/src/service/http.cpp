#include "assembly/service/http.hpp"

#include "assembly/error.hpp"
#include "assembly/json_fields.hpp"

#include <httplib.h>

namespace assembly::service {

namespace fields = json_fields;

namespace {

const char* const kJson = "application/json";

void send_json(httplib::Response& res, const Json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const std::string& name, const std::string& message) {
    send_json(res, {{"error", name}, {"message", message}}, status_for_error(name));
}

Json parse_body(const httplib::Request& req) {
    try {
        return Json::parse(req.body);
    } catch (const Json::parse_error& e) {
        throw InvalidRequest(std::string("request body is not JSON: ") + e.what());
    }
}

// Runs a handler, mapping domain errors to JSON error responses.
template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const SchemaError& e) {
            // A malformed request body surfaces as a schema failure of the request.
            send_error(res, "InvalidRequest", e.what());
        } catch (const Error& e) {
            send_error(res, e.name(), e.what());
        } catch (const std::exception& e) {
            send_error(res, "InternalError", e.what());
        }
    };
}

std::size_t parse_index(const std::string& text) {
    if (text.empty() || text.size() > 9 || text.find_first_not_of("0123456789") != std::string::npos) {
        throw InvalidRequest("'" + text + "' is not an assignment index");
    }
    return std::stoul(text);
}

} // namespace

int status_for_error(const std::string& name) {
    if (name == "NotFound") return 404;
    if (name == "InvalidRequest" || name == "SchemaError") return 400;
    if (name == "ViewsIncomplete" || name == "AlreadySubmitted" || name == "SessionClosed") return 409;
    return 500;
}

HttpService::HttpService(Store& store)
    : Data(store)
    , Server(std::make_unique<httplib::Server>())
{
    // No SO_REUSEPORT: a second server on the same port must fail to bind.
    Server->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    Server->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    Server->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    Server->Get("/stories", guarded([this](const httplib::Request&, httplib::Response& res) {
        Json out = Json::array();
        for (const auto& summary : Data.list_stories()) {
            out.push_back(to_json(summary));
        }
        send_json(res, out);
    }));

    Server->Get(R"(/stories/([^/]+)/views/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto kind = interfaces::parse_view_kind(req.matches[2].str());
        send_json(res, Data.get_view(req.matches[1].str(), kind));
    }));

    Server->Get(R"(/stories/([^/]+)/questions)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, to_json(Data.get_questions(req.matches[1].str())));
    }));

    Server->Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const Json body = parse_body(req);
        const std::string where = "session request";
        const std::string participant = fields::require_string(body, "participant_id", where);
        std::vector<std::string> stories;
        for (const auto& id : fields::require_array(body, "story_ids", where)) {
            if (!id.is_string()) {
                throw InvalidRequest("story_ids must be strings");
            }
            stories.push_back(id.get<std::string>());
        }
        std::optional<std::uint64_t> seed;
        if (body.contains("seed") && !body["seed"].is_null()) {
            seed = static_cast<std::uint64_t>(fields::require_index(body, "seed", where));
        }
        send_json(res, to_json(Data.start_exercise(participant, stories, seed)), 201);
    }));

    Server->Post(R"(/sessions/([^/]+)/assignments/([^/]+)/submit)",
                 guarded([this](const httplib::Request& req, httplib::Response& res) {
                     const Json body = parse_body(req);
                     const std::string where = "submission";
                     std::vector<std::string> answers;
                     for (const auto& a : fields::require_array(body, "answers", where)) {
                         if (!a.is_string()) {
                             throw InvalidRequest("answers must be strings");
                         }
                         answers.push_back(a.get<std::string>());
                     }
                     ClientStats stats;
                     if (body.contains("client_stats")) {
                         const Json& c = body["client_stats"];
                         stats.links_opened = c.contains("links_opened") ? fields::require_index(c, "links_opened", where) : 0;
                         stats.tab_switches = c.contains("tab_switches") ? fields::require_index(c, "tab_switches", where) : 0;
                         stats.duration_seconds =
                             c.contains("duration_seconds") ? fields::require_index(c, "duration_seconds", where) : 0;
                     }
                     const auto session =
                         Data.submit_exercise(req.matches[1].str(), parse_index(req.matches[2].str()), answers, stats);
                     send_json(res, to_json(session));
                 }));

    Server->Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, to_json(Data.get_session(req.matches[1].str())));
    }));

    Server->Get("/export/responses", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto rows = Data.export_responses();
        if (req.get_param_value("format") == "csv") {
            res.set_content(evalkit::to_csv(rows), "text/csv");
            return;
        }
        send_json(res, evalkit::to_json(rows));
    }));

    Server->set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            res.set_content(Json{{"error", res.status == 404 ? "NotFound" : "HttpError"},
                                 {"message", httplib::status_message(res.status)}}
                                .dump(),
                            kJson);
        }
    });
}

HttpService::~HttpService() = default;

bool HttpService::listen(const std::string& host, int port) {
    return Server->listen(host, port);
}

int HttpService::bind_any_port(const std::string& host) {
    return Server->bind_to_any_port(host);
}

bool HttpService::listen_after_bind() {
    return Server->listen_after_bind();
}

void HttpService::stop() {
    Server->stop();
}

void HttpService::wait_until_ready() const {
    Server->wait_until_ready();
}

} // namespace assembly::service
