#include "coplattice/session.hpp"

#include "coplattice/errors.hpp"
#include "coplattice/io.hpp"

#include <cstdio>
#include <iostream>

namespace coplattice {

using nlohmann::json;
using nlohmann::ordered_json;

std::string phase_name(Phase p) {
    switch (p) {
        case Phase::AwaitingPlacement: return "AwaitingPlacement";
        case Phase::AwaitingRobberMove: return "AwaitingRobberMove";
        case Phase::Finished: return "Finished";
    }
    return "Finished";
}

Session::Session(std::string id, CopSet copset)
    : id_(std::move(id)), copset_(std::move(copset)), verdict_(classify(copset_)) {}

void Session::place(const Point& p, Coord limit) {
    if (phase_ != Phase::AwaitingPlacement) throw SessionError("WrongPhase", "robber already placed");
    if (p.dim() != copset_.dim())
        throw SessionError("IllegalMove", "expected " + std::to_string(copset_.dim()) + " coordinates");
    for (Coord c : p)
        if (c > limit || c < -limit)
            throw SessionError("IllegalMove", "placement outside [-" + std::to_string(limit) + ", " +
                                                  std::to_string(limit) + "]");
    game_.emplace(copset_, p);
    last_actor_ = Actor::Placement;
    phase_ = game_->state().status.finished() ? Phase::Finished : Phase::AwaitingRobberMove;
}

void Session::submit(const Move& m) {
    if (phase_ != Phase::AwaitingRobberMove) throw SessionError("WrongPhase", "no robber move expected");
    if (const auto& d = m.direction(); d && static_cast<std::size_t>(d->axis) >= copset_.dim())
        throw SessionError("IllegalMove", "axis out of range");
    history_.push_back(m);
    last_actor_ = Actor::Robber;
    if (!game_->robber_move(m)) {
        game_->cops_move();
        last_actor_ = Actor::Cops;
    }
    if (game_->state().status.finished()) phase_ = Phase::Finished;
}

void Session::resign() {
    if (phase_ != Phase::AwaitingRobberMove) throw SessionError("WrongPhase", "nothing to resign");
    game_->resign();
    phase_ = Phase::Finished;
}

ordered_json Session::view(bool include_spec) const {
    ordered_json v;
    v["id"] = id_;
    v["phase"] = phase_name(phase_);
    if (game_) {
        const auto rec = to_json(game_->record(last_actor_));
        for (auto& [k, val] : rec.items()) v[k] = val;
        v["bound"] = game_->bound();
    } else {
        v["turn"] = 0;
        v["actor"] = nullptr;
        v["robber"] = nullptr;
        v["cops"] = ordered_json::object();
        v["potentials"] = ordered_json::object();
        v["matched"] = ordered_json::object();
        v["status"] = "running";
        v["bound"] = nullptr;
    }
    v["dimension"] = copset_.dim();
    v["verdict"] = verdict_to_json(verdict_);
    ordered_json moves = ordered_json::array();
    for (const auto& m : history_) moves.push_back(m.name());
    v["history"] = std::move(moves);
    if (include_spec) v["spec"] = copset_to_json(copset_);
    return v;
}

SessionManager::SessionManager(SessionOptions options, std::function<Clock::time_point()> now)
    : options_(options), now_(std::move(now)), id_rng_(options.id_seed ? *options.id_seed : std::random_device{}()) {}

std::string SessionManager::fresh_id() {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id_rng_()));
    return buf;
}

std::size_t SessionManager::size() {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::size_t SessionManager::expire_idle() {
    const auto now = now_();
    std::lock_guard lock(mutex_);
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        // A session whose lock is held is in use, hence not idle.
        std::unique_lock busy(it->second->mutex, std::try_to_lock);
        if (busy && now - it->second->last_used > options_.idle_timeout) {
            busy.unlock();
            it = sessions_.erase(it);
            ++dropped;
        } else {
            ++it;
        }
    }
    return dropped;
}

namespace {

const json& require(const json& req, const char* key) {
    auto it = req.find(key);
    if (it == req.end()) throw SessionError("BadRequest", std::string("missing field '") + key + "'");
    return *it;
}

std::vector<Coord> int_vector(const json& v, const char* what) {
    if (!v.is_array()) throw SessionError("BadRequest", std::string(what) + " must be an integer array");
    std::vector<Coord> out;
    for (const auto& x : v) {
        if (!x.is_number_integer()) throw SessionError("BadRequest", std::string(what) + " must be an integer array");
        out.push_back(x.get<Coord>());
    }
    return out;
}

Move parse_wire_move(const json& req, std::size_t dim) {
    if (req.contains("stay") && req["stay"] == true) return Move::stay();
    if (req.contains("delta")) {
        const auto delta = int_vector(req["delta"], "delta");
        if (delta.size() != dim) throw SessionError("IllegalMove", "delta must have " + std::to_string(dim) + " entries");
        try {
            return move_from_delta(delta);
        } catch (const IllegalMove& e) {
            throw SessionError("IllegalMove", e.what());
        }
    }
    if (req.contains("move")) {
        if (!req["move"].is_string()) throw SessionError("BadRequest", "move must be a string");
        try {
            return parse_move(req["move"].get<std::string>(), dim);
        } catch (const std::invalid_argument& e) {
            throw SessionError("IllegalMove", e.what());
        }
    }
    const auto& axis = require(req, "axis");
    const auto& sign = require(req, "sign");
    if (!axis.is_number_integer() || !sign.is_number_integer())
        throw SessionError("BadRequest", "axis and sign must be integers");
    const auto a = axis.get<Coord>();
    const auto s = sign.get<Coord>();
    if (a < 1 || a > static_cast<Coord>(dim)) throw SessionError("IllegalMove", "axis out of range");
    if (s == 0) return Move::stay();
    if (s != 1 && s != -1) throw SessionError("IllegalMove", "sign must be -1, 0 or 1");
    return Move::step(static_cast<int>(a - 1), static_cast<int>(s));
}

ordered_json failure(const std::string& code, const std::string& message) {
    return ordered_json{{"ok", false}, {"error", code}, {"message", message}};
}

}  // namespace

ordered_json SessionManager::create(const json& req) {
    std::optional<CopSet> spec;
    try {
        if (req.contains("spec")) {
            spec = copset_from_json(req["spec"]);
        } else {
            std::size_t dim = 2;
            if (req.contains("dimension")) {
                const auto& d = req["dimension"];
                if (!d.is_number_integer() || d.get<Coord>() < 1 || d.get<Coord>() > 16)
                    throw SpecError("dimension", "must be an integer in 1..16");
                dim = d.get<std::size_t>();
            }
            const auto& preset = require(req, "preset");
            if (!preset.is_string()) throw SpecError("preset", "must be a string");
            spec = preset_copset(preset.get<std::string>(), dim);
        }
    } catch (const SpecError& e) {
        throw SessionError("BadSpec", e.what());
    }
    std::shared_ptr<Entry> entry;
    {
        std::lock_guard lock(mutex_);
        std::string id;
        do id = fresh_id();
        while (sessions_.count(id));
        entry = std::make_shared<Entry>(id, std::move(*spec), now_());
        sessions_.emplace(id, entry);
    }
    std::lock_guard lock(entry->mutex);
    return entry->session.view(true);
}

std::shared_ptr<SessionManager::Entry> SessionManager::lookup(const json& req) {
    const auto& id = require(req, "id");
    if (!id.is_string()) throw SessionError("UnknownSession", "id must be a string");
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id.get<std::string>());
    if (it == sessions_.end()) throw SessionError("UnknownSession", "no session '" + id.get<std::string>() + "'");
    return it->second;
}

ordered_json SessionManager::handle(const json& req) {
    try {
        expire_idle();
        if (!req.is_object()) throw SessionError("BadRequest", "request must be a JSON object");
        const auto& op_v = require(req, "op");
        if (!op_v.is_string()) throw SessionError("BadRequest", "op must be a string");
        const auto op = op_v.get<std::string>();
        if (op == "create") return ordered_json{{"ok", true}, {"view", create(req)}};
        if (op != "place" && op != "move" && op != "state" && op != "resign")
            throw SessionError("BadRequest", "unknown op '" + op + "'");

        auto entry = lookup(req);
        std::lock_guard lock(entry->mutex);
        // The sweep may have dropped it between lookup and lock.
        if (now_() - entry->last_used > options_.idle_timeout)
            throw SessionError("UnknownSession", "session expired");
        entry->last_used = now_();
        auto& s = entry->session;
        if (op == "place") {
            s.place(Point(int_vector(require(req, "point"), "point")), options_.placement_limit);
        } else if (op == "move") {
            s.submit(parse_wire_move(req, s.copset().dim()));
        } else if (op == "resign") {
            s.resign();
        }
        return ordered_json{{"ok", true}, {"view", s.view()}};
    } catch (const SessionError& e) {
        return failure(e.code(), e.what());
    }
}

std::string SessionManager::handle_line(std::string_view line) {
    json req;
    try {
        req = json::parse(line);
    } catch (const json::parse_error& e) {
        return failure("BadRequest", e.what()).dump();
    }
    return handle(req).dump();
}

void serve_stdio(SessionManager& manager, std::istream& in, std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out << manager.handle_line(line) << '\n' << std::flush;
    }
}

}  // namespace coplattice
