#include "qnlay/service.hpp"

#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace qnlay {

namespace {

ServiceResponse error(int status, const std::string& message) { return {status, {{"error", message}}}; }

Json outcome_json(const GameOutcome& o) {
    Json witness = Json::array();
    for (const auto& [u, v] : o.witness) witness.push_back({u, v});
    Json j = {{"kind", to_string(o.kind)}, {"rounds", o.rounds}, {"witness", witness}};
    if (!o.description.empty()) j["description"] = o.description;
    return j;
}

}  // namespace

Json state_view(const std::string& id, const std::string& bob, const GameSession& session) {
    const GameState& s = session.state();
    const Graph& g = s.graph();

    Json order = Json::array();
    for (Vertex v : s.sequence()) order.push_back(g.token(v));
    Json edges = Json::array();
    for (const auto& e : g.edges()) {
        Vertex u = e.u, v = e.v;
        if (s.position(v) < s.position(u)) std::swap(u, v);
        edges.push_back({g.token(u), g.token(v)});
    }
    Json pending = nullptr;
    if (s.pending()) {
        Json adjacency = Json::array();
        for (Vertex c : s.sorted_by_position(s.pending()->clique)) adjacency.push_back(g.token(c));
        pending = {{"v", s.pending()->vertex},
                   {"clique", make_clique_ref(g, s.pending()->clique).members},
                   {"adjacency", adjacency},
                   {"positions", {0, s.size()}}};
    }
    const auto rainbow = max_rainbow(s.order(), g.edges());
    return {{"id", id},
            {"k", s.k()},
            {"bob", bob},
            {"round", s.round()},
            {"round_cap", session.round_cap()},
            {"status", session.finished() ? "finished" : "open"},
            {"phase", to_string(session.controller().phase())},
            {"order", order},
            {"edges", edges},
            {"pending", pending},
            {"max_rainbow", witness_to_json(g, rainbow)},
            {"outcome", session.finished() ? outcome_json(session.trace().outcome) : Json(nullptr)}};
}

SessionManager::SessionManager(ServiceConfig config) : config_(std::move(config)) {}

std::size_t SessionManager::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::shared_ptr<SessionManager::Record> SessionManager::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

ServiceResponse SessionManager::create(const Json& body) {
    if (!body.is_object()) return error(400, "request body must be a JSON object");
    if (!body.contains("k") || !body.at("k").is_number_integer()) return error(422, "\"k\" must be an integer");
    const int k = body.at("k").get<int>();
    const std::string bob_name = body.contains("bob") && body.at("bob").is_string() ? body.at("bob").get<std::string>() : "human";
    GameConfig config;
    config.round_cap = config_.round_cap;
    if (body.contains("seed")) {
        if (!body.at("seed").is_number_unsigned()) return error(422, "\"seed\" must be a non-negative integer");
        config.seed = body.at("seed").get<std::uint64_t>();
    }
    auto record = std::make_shared<Record>();
    try {
        if (body.contains("initial_order")) {
            std::vector<VertexId> order;
            for (const auto& t : body.at("initial_order")) order.push_back(token_from_json(t));
            config.initial_order = std::move(order);
        }
        if (bob_name != "human") record->bob = make_bob(bob_name, config.seed);
        record->session = std::make_unique<GameSession>(k, config);
    } catch (const InputError& e) {
        return error(422, e.what());
    }
    record->bob_name = bob_name;
    record->created = record->updated = std::chrono::system_clock::now();
    {
        std::lock_guard lock(mutex_);
        record->id = "s" + std::to_string(next_id_++);
        sessions_.emplace(record->id, record);
    }
    spdlog::info("session {} created: k={} bob={}", record->id, k, bob_name);
    std::lock_guard lock(record->mutex);
    persist(*record);
    return {201, {{"id", record->id}, {"state", state_view(record->id, bob_name, *record->session)}}};
}

ServiceResponse SessionManager::get(const std::string& id) {
    const auto record = find(id);
    if (!record) return error(404, "unknown session " + id);
    std::lock_guard lock(record->mutex);
    return {200, state_view(record->id, record->bob_name, *record->session)};
}

ServiceResponse SessionManager::bob_move(const std::string& id, const Json& body) {
    const auto record = find(id);
    if (!record) return error(404, "unknown session " + id);
    std::unique_lock lock(record->mutex, std::try_to_lock);
    if (!lock.owns_lock()) return error(409, "a move is already in flight for session " + id);
    GameSession& session = *record->session;
    if (session.finished()) return error(409, "session " + id + " is finished");
    if (!body.is_object()) return error(400, "request body must be a JSON object");

    int pos = 0;
    if (body.contains("pos")) {
        if (!body.at("pos").is_number_integer()) return error(422, "\"pos\" must be an integer");
        pos = body.at("pos").get<int>();
    } else if (record->bob) {
        pos = record->bob->choose(session.state());
    } else {
        return error(422, "\"pos\" is required");
    }
    try {
        session.bob_move(pos);
    } catch (const IllegalMove& e) {
        return error(422, e.what());
    }
    record->updated = std::chrono::system_clock::now();
    spdlog::debug("session {} round {}: bob at {}", id, session.state().round(), pos);
    if (session.finished()) {
        spdlog::info("session {} finished: {} after {} rounds", id, to_string(session.trace().outcome.kind),
                     session.trace().outcome.rounds);
        persist(*record);
    }
    return {200, state_view(record->id, record->bob_name, session)};
}

ServiceResponse SessionManager::remove(const std::string& id) {
    std::shared_ptr<Record> record;
    {
        std::lock_guard lock(mutex_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) return error(404, "unknown session " + id);
        record = it->second;
        sessions_.erase(it);
    }
    spdlog::info("session {} deleted", id);
    return {200, {{"deleted", id}}};
}

void SessionManager::persist(const Record& record) const {
    if (!config_.trace_dir || !record.session->finished()) return;
    try {
        std::filesystem::create_directories(*config_.trace_dir);
        write_json_file(*config_.trace_dir / (record.id + ".json"), trace_to_json(record.session->trace()));
    } catch (const std::exception& e) {
        spdlog::warn("could not write trace for {}: {}", record.id, e.what());
    }
}

struct GameServer::Impl {
    explicit Impl(ServiceConfig config) : sessions(config), static_dir(config.static_dir) {}

    SessionManager sessions;
    std::optional<std::filesystem::path> static_dir;
    httplib::Server server;
    std::thread thread;
};

namespace {

void reply(httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

Json parse_body(const httplib::Request& req, bool& ok) {
    ok = true;
    if (req.body.empty()) return Json::object();
    try {
        return Json::parse(req.body);
    } catch (const Json::parse_error&) {
        ok = false;
        return nullptr;
    }
}

}  // namespace

GameServer::GameServer(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
    auto& svr = impl_->server;
    SessionManager& sessions = impl_->sessions;

    svr.Post("/sessions", [&sessions](const httplib::Request& req, httplib::Response& res) {
        bool ok = false;
        const Json body = parse_body(req, ok);
        reply(res, ok ? sessions.create(body) : error(400, "malformed JSON body"));
    });
    svr.Get(R"(/sessions/([^/]+))", [&sessions](const httplib::Request& req, httplib::Response& res) {
        reply(res, sessions.get(req.matches[1]));
    });
    svr.Post(R"(/sessions/([^/]+)/bob-move)", [&sessions](const httplib::Request& req, httplib::Response& res) {
        bool ok = false;
        const Json body = parse_body(req, ok);
        reply(res, ok ? sessions.bob_move(req.matches[1], body) : error(400, "malformed JSON body"));
    });
    svr.Delete(R"(/sessions/([^/]+))", [&sessions](const httplib::Request& req, httplib::Response& res) {
        reply(res, sessions.remove(req.matches[1]));
    });
    svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        spdlog::error("request failed: {}", what);
        reply(res, error(500, what));
    });
    if (impl_->static_dir && !svr.set_mount_point("/", impl_->static_dir->string()))
        throw InputError("static directory " + impl_->static_dir->string() + " does not exist");
}

GameServer::~GameServer() { stop(); }

int GameServer::start(const std::string& host, int port) {
    auto& svr = impl_->server;
    int bound = port;
    if (port == 0) {
        bound = svr.bind_to_any_port(host);
        if (bound < 0) throw InputError("could not bind " + host);
    } else if (!svr.bind_to_port(host, port)) {
        throw InputError("could not bind " + host + ":" + std::to_string(port));
    }
    impl_->thread = std::thread([&svr] { svr.listen_after_bind(); });
    spdlog::info("game service listening on {}:{}", host, bound);
    return bound;
}

void GameServer::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

void GameServer::stop() {
    if (!impl_) return;
    impl_->server.stop();
    wait();
}

SessionManager& GameServer::sessions() { return impl_->sessions; }

}  // namespace qnlay
