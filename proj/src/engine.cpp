#include "coplattice/engine.hpp"

#include "coplattice/errors.hpp"

#include <algorithm>
#include <sstream>

namespace coplattice {

std::string GameStatus::str() const {
    switch (kind) {
        case Kind::Running: return "running";
        case Kind::Captured: return "captured:" + (by ? by->name() : std::string("static"));
        case Kind::HorizonReached: return "horizon";
        case Kind::Resigned: return "resigned";
    }
    return "running";
}

std::string actor_name(Actor a) {
    switch (a) {
        case Actor::Placement: return "placement";
        case Actor::Robber: return "robber";
        case Actor::Cops: return "cops";
    }
    return "placement";
}

namespace {

Actor parse_actor(const std::string& s) {
    if (s == "robber") return Actor::Robber;
    if (s == "cops") return Actor::Cops;
    if (s == "placement") return Actor::Placement;
    throw std::invalid_argument("unknown actor '" + s + "'");
}

bool contains_point(const std::vector<Point>& pts, const Point& p) {
    return std::find(pts.begin(), pts.end(), p) != pts.end();
}

}  // namespace

nlohmann::ordered_json to_json(const TraceRecord& r) {
    nlohmann::ordered_json cops = nlohmann::ordered_json::object();
    nlohmann::ordered_json pots = nlohmann::ordered_json::object();
    nlohmann::ordered_json matched = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.cops.size(); ++i) {
        const auto key = Direction::from_index(i).name();
        cops[key] = r.cops[i] ? nlohmann::ordered_json(r.cops[i]->vec()) : nlohmann::ordered_json(nullptr);
        pots[key] = r.potentials[i] ? nlohmann::ordered_json(*r.potentials[i]) : nlohmann::ordered_json(nullptr);
        matched[key] = r.matched[i] ? nlohmann::ordered_json(*r.matched[i]) : nlohmann::ordered_json(nullptr);
    }
    nlohmann::ordered_json j;
    j["turn"] = r.turn;
    j["actor"] = actor_name(r.actor);
    j["robber"] = r.robber.vec();
    j["cops"] = std::move(cops);
    j["potentials"] = std::move(pots);
    j["matched"] = std::move(matched);
    j["status"] = r.status;
    return j;
}

TraceRecord trace_record_from_json(const nlohmann::json& j) {
    TraceRecord r;
    r.turn = j.at("turn").get<std::int64_t>();
    r.actor = parse_actor(j.at("actor").get<std::string>());
    r.robber = Point(j.at("robber").get<std::vector<Coord>>());
    const std::size_t slots = 2 * r.robber.dim();
    r.cops.resize(slots);
    r.potentials.resize(slots);
    r.matched.resize(slots);
    for (std::size_t i = 0; i < slots; ++i) {
        const auto key = Direction::from_index(i).name();
        if (const auto& c = j.at("cops").at(key); !c.is_null()) r.cops[i] = Point(c.get<std::vector<Coord>>());
        if (const auto& p = j.at("potentials").at(key); !p.is_null()) r.potentials[i] = p.get<Coord>();
        if (const auto& m = j.at("matched").at(key); !m.is_null()) r.matched[i] = m.get<bool>();
    }
    r.status = j.at("status").get<std::string>();
    return r;
}

std::string to_ndjson(const std::vector<TraceRecord>& trace) {
    std::string out;
    for (const auto& r : trace) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

Coord capture_bound(const GameState& initial) {
    Coord sum = 0;
    for (const auto& p : initial.potentials)
        if (p) sum += *p;
    return sum;
}

Game::Game(CopSet copset, Point robber_start, bool check_invariants, std::span<const Point> exclude)
    : copset_(std::move(copset)), check_invariants_(check_invariants) {
    require_same_dim(Point(copset_.dim()), robber_start);
    state_.robber = std::move(robber_start);
    state_.roster = select_best_effort_roster(copset_, state_.robber, exclude);
    refresh();
    bound_ = capture_bound(state_);
    for (auto d : all_directions(copset_.dim())) {
        const auto& slot = state_.roster[d];
        if (slot && slot->position == state_.robber) {
            state_.status = {GameStatus::Kind::Captured, d, state_.robber, 0};
            return;
        }
    }
    if (copset_.contains(state_.robber)) state_.status = {GameStatus::Kind::Captured, std::nullopt, state_.robber, 0};
}

void Game::refresh() {
    state_.potentials = potentials(state_.roster, state_.robber);
    state_.matched = match_state(state_.roster, state_.robber);
}

void Game::check_capture_after_robber() {
    for (auto d : all_directions(copset_.dim())) {
        const auto& slot = state_.roster[d];
        if (slot && slot->position == state_.robber) {
            state_.status = {GameStatus::Kind::Captured, d, state_.robber, state_.turn};
            return;
        }
    }
    const auto& r = state_.robber;
    if (copset_.contains(r) && !contains_point(state_.roster.starts(), r) && !contains_point(reserved_, r))
        state_.status = {GameStatus::Kind::Captured, std::nullopt, r, state_.turn};
}

bool Game::robber_move(const Move& move) {
    if (state_.status.finished()) throw ContractViolation("robber_move on a finished game");
    last_robber_prev_ = state_.robber;
    last_robber_move_ = move;
    turn_start_potentials_ = state_.potentials;
    state_.robber = move.apply(state_.robber);
    ++state_.turn;
    refresh();
    check_capture_after_robber();
    return state_.status.captured();
}

bool Game::cops_move() {
    if (state_.status.finished()) throw ContractViolation("cops_move on a finished game");
    const auto& before = turn_start_potentials_;
    auto moves = cop_turn(state_.roster, last_robber_prev_, last_robber_move_);
    apply_cop_moves(state_.roster, moves);
    refresh();
    for (auto d : all_directions(copset_.dim())) {
        const auto& p = state_.potentials[d.index()];
        if (p && *p == 0) {
            state_.status = {GameStatus::Kind::Captured, d, state_.robber, state_.turn};
            break;
        }
    }
    if (check_invariants_ && state_.roster.complete()) check_invariants(before);
    return state_.status.captured();
}

void Game::check_invariants(const PotentialVector& before) const {
    bool strict = false;
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (*state_.potentials[i] > *before[i])
            throw ContractViolation("potential increased for " + Direction::from_index(i).name() + " at turn " +
                                    std::to_string(state_.turn));
        if (*state_.potentials[i] < *before[i]) strict = true;
    }
    if (!strict)
        throw ContractViolation("no potential decreased at turn " + std::to_string(state_.turn));
    if (state_.status.captured()) return;
    for (auto d : all_directions(copset_.dim())) {
        if (shell_index(state_.roster[d]->position, d, state_.robber) < 1)
            throw ContractViolation("sidedness violated for " + d.name() + " at turn " + std::to_string(state_.turn));
    }
}

void Game::play_turn(const Move& move) {
    if (!robber_move(move)) cops_move();
}

void Game::resign() {
    if (state_.status.finished()) throw ContractViolation("resign on a finished game");
    state_.status = {GameStatus::Kind::Resigned, std::nullopt, state_.robber, state_.turn};
}

void Game::reach_horizon() {
    if (state_.status.finished()) return;
    state_.status = {GameStatus::Kind::HorizonReached, std::nullopt, state_.robber, state_.turn};
}

void Game::capture_by_foreign(std::int64_t turn) {
    if (state_.status.finished()) return;
    state_.status = {GameStatus::Kind::Captured, std::nullopt, state_.robber, turn};
}

TraceRecord Game::record(Actor actor) const {
    TraceRecord r;
    r.turn = state_.turn;
    r.actor = actor;
    r.robber = state_.robber;
    for (const auto& s : state_.roster.slots())
        r.cops.push_back(s ? std::optional<Point>(s->position) : std::nullopt);
    r.potentials = state_.potentials;
    r.matched = state_.matched;
    r.status = state_.status.str();
    return r;
}

GameResult run_game(const GameConfig& config) {
    if (std::holds_alternative<External>(config.policy))
        throw ContractViolation("run_game needs a move-generating robber policy");
    if (config.max_turns < 1) throw ContractViolation("max_turns must be >= 1");
    Game game(config.copset, config.robber_start, config.check_invariants);
    RobberAgent agent(config.policy, config.seed);
    GameResult result;
    result.trace.push_back(game.record(Actor::Placement));
    while (!game.state().status.finished() && game.state().turn < config.max_turns) {
        Move mv = agent.next(game.state().robber, game.state().roster);
        game.robber_move(mv);
        result.trace.push_back(game.record(Actor::Robber));
        if (game.state().status.finished()) break;
        game.cops_move();
        result.trace.push_back(game.record(Actor::Cops));
    }
    if (!game.state().status.finished()) {
        game.reach_horizon();
        result.trace.back().status = game.state().status.str();
    }
    result.final_state = game.state();
    result.bound = game.bound();
    return result;
}

MultiResult run_multi(const CopSet& copset, const std::vector<RobberEntry>& robbers, std::int64_t max_turns,
                      std::uint64_t seed, bool check_invariants) {
    if (robbers.empty()) throw ContractViolation("run_multi needs at least one robber");
    std::vector<Game> games;
    std::vector<RobberAgent> agents;
    std::vector<Point> taken;
    for (const auto& r : robbers) {
        games.emplace_back(copset, r.start, check_invariants, taken);
        for (auto& p : games.back().state().roster.starts()) taken.push_back(std::move(p));
        agents.emplace_back(r.policy, seed);
    }
    for (std::size_t i = 0; i < games.size(); ++i) {
        std::vector<Point> others;
        for (std::size_t k = 0; k < games.size(); ++k)
            if (k != i)
                for (auto& p : games[k].state().roster.starts()) others.push_back(std::move(p));
        games[i].set_reserved(std::move(others));
    }

    auto foreign_check = [&](std::int64_t turn) {
        for (std::size_t i = 0; i < games.size(); ++i) {
            if (games[i].state().status.finished()) continue;
            for (std::size_t k = 0; k < games.size(); ++k) {
                if (k == i) continue;
                if (contains_point(games[k].state().roster.positions(), games[i].state().robber))
                    games[i].capture_by_foreign(turn);
            }
        }
    };
    auto any_running = [&] {
        return std::any_of(games.begin(), games.end(), [](const Game& g) { return !g.state().status.finished(); });
    };

    MultiResult out;
    std::int64_t turn = 0;
    while (any_running() && turn < max_turns) {
        ++turn;
        for (std::size_t i = 0; i < games.size(); ++i) {
            if (games[i].state().status.finished()) continue;
            games[i].robber_move(agents[i].next(games[i].state().robber, games[i].state().roster));
        }
        foreign_check(turn);
        for (auto& g : games)
            if (!g.state().status.finished()) g.cops_move();
        foreign_check(turn);
    }
    for (auto& g : games) g.reach_horizon();
    out.turns = turn;
    for (std::size_t i = 0; i < games.size(); ++i) {
        const auto& s = games[i].state();
        out.robbers.push_back({robbers[i].start, s.roster, games[i].bound(), s.status, s.robber});
    }
    return out;
}

}  // namespace coplattice
