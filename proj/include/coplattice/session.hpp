#pragma once

#include "coplattice/engine.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace coplattice {

enum class Phase { AwaitingPlacement, AwaitingRobberMove, Finished };
std::string phase_name(Phase p);

// Wire-level failure. code() is one of IllegalMove, WrongPhase,
// UnknownSession, BadSpec, BadRequest.
class SessionError : public std::runtime_error {
public:
    SessionError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct SessionOptions {
    std::chrono::seconds idle_timeout{30 * 60};
    Coord placement_limit = 1'000'000;
    // Fixed seed for session ids (tests); random otherwise.
    std::optional<std::uint64_t> id_seed;
};

class Session {
public:
    Session(std::string id, CopSet copset);

    const std::string& id() const noexcept { return id_; }
    Phase phase() const noexcept { return phase_; }
    const CopSet& copset() const noexcept { return copset_; }
    const Verdict& verdict() const noexcept { return verdict_; }
    const std::optional<Game>& game() const noexcept { return game_; }
    const std::vector<Move>& history() const noexcept { return history_; }

    void place(const Point& p, Coord limit);
    void submit(const Move& m);
    void resign();

    nlohmann::ordered_json view(bool include_spec = false) const;

private:
    std::string id_;
    CopSet copset_;
    Verdict verdict_;
    std::optional<Game> game_;
    std::vector<Move> history_;
    Actor last_actor_ = Actor::Placement;
    Phase phase_ = Phase::AwaitingPlacement;
};

// Thread-safe registry. Commands on one session are serialized by a
// per-session lock; different sessions never contend beyond the lookup.
class SessionManager {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionManager(SessionOptions options = {}, std::function<Clock::time_point()> now = Clock::now);

    // {"op": "create" | "place" | "move" | "state" | "resign", ...}
    // -> {"ok": true, "view": {...}} or {"ok": false, "error": code, "message": text}.
    nlohmann::ordered_json handle(const nlohmann::json& request);
    std::string handle_line(std::string_view line);

    std::size_t size();
    // Drops sessions idle for longer than the timeout; returns how many.
    std::size_t expire_idle();

private:
    struct Entry {
        std::mutex mutex;
        Session session;
        Clock::time_point last_used;

        Entry(std::string id, CopSet c, Clock::time_point t) : session(std::move(id), std::move(c)), last_used(t) {}
    };

    nlohmann::ordered_json create(const nlohmann::json& request);
    std::shared_ptr<Entry> lookup(const nlohmann::json& request);
    std::string fresh_id();

    SessionOptions options_;
    std::function<Clock::time_point()> now_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::mt19937_64 id_rng_;
};

// Line-delimited JSON over a stream pair until EOF.
void serve_stdio(SessionManager& manager, std::istream& in, std::ostream& out);

}  // namespace coplattice
