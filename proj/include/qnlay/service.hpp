#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "qnlay/game.hpp"
#include "qnlay/io.hpp"

namespace qnlay {

struct ServiceConfig {
    int round_cap = 0;  // 0: default_round_cap(k)
    std::optional<std::filesystem::path> trace_dir;
    std::optional<std::filesystem::path> static_dir;
};

struct ServiceResponse {
    int status = 200;
    Json body;
};

/// Client-facing snapshot of a session; contains no timestamps, so it is a
/// function of the move history alone.
Json state_view(const std::string& id, const std::string& bob, const GameSession& session);

/// In-memory game sessions. Calls on distinct sessions run concurrently;
/// a second move on a session already processing one gets 409.
class SessionManager {
public:
    explicit SessionManager(ServiceConfig config = {});

    /// Body: {"k": int, "bob": "human" | strategy, "seed"?, "initial_order"?}.
    ServiceResponse create(const Json& body);
    ServiceResponse get(const std::string& id);
    /// Body: {"pos": int}; strategy sessions may omit pos to let Bob choose.
    ServiceResponse bob_move(const std::string& id, const Json& body);
    ServiceResponse remove(const std::string& id);

    std::size_t size() const;

private:
    struct Record {
        std::mutex mutex;
        std::string id;
        std::string bob_name;
        std::unique_ptr<BobStrategy> bob;  // null for human play
        std::unique_ptr<GameSession> session;
        std::chrono::system_clock::time_point created;
        std::chrono::system_clock::time_point updated;
    };

    std::shared_ptr<Record> find(const std::string& id) const;
    void persist(const Record& record) const;

    ServiceConfig config_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Record>> sessions_;
    std::uint64_t next_id_ = 1;
};

/// HTTP front end for SessionManager:
///   POST /sessions, GET /sessions/{id}, POST /sessions/{id}/bob-move,
///   DELETE /sessions/{id}; static files from config.static_dir if set.
class GameServer {
public:
    explicit GameServer(ServiceConfig config = {});
    ~GameServer();
    GameServer(const GameServer&) = delete;
    GameServer& operator=(const GameServer&) = delete;

    /// Binds (port 0 picks a free one) and serves on a background thread.
    /// Returns the bound port; throws InputError if binding fails.
    int start(const std::string& host, int port);
    /// Blocks until stop() is called.
    void wait();
    void stop();

    SessionManager& sessions();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace qnlay
