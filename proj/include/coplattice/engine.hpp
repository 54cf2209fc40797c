#pragma once

#include "coplattice/copset.hpp"
#include "coplattice/strategy.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coplattice {

struct GameConfig {
    CopSet copset;
    Point robber_start;
    RobberPolicy policy = GreedyEvader{};
    std::int64_t max_turns = 10'000;
    std::uint64_t seed = 0;
    // Assert potential monotonicity and sidedness after every cops' turn.
    bool check_invariants = false;
};

struct GameStatus {
    enum class Kind { Running, Captured, HorizonReached, Resigned };

    Kind kind = Kind::Running;
    std::optional<Direction> by;  // capturing roster cop; nullopt for a static cop
    Point at;
    std::int64_t turn = 0;

    bool finished() const noexcept { return kind != Kind::Running; }
    bool captured() const noexcept { return kind == Kind::Captured; }
    // "running", "captured:X1+", "captured:static", "horizon", "resigned"
    std::string str() const;
};

struct GameState {
    std::int64_t turn = 0;
    Point robber;
    ActiveCopRoster roster;
    PotentialVector potentials;
    MatchState matched;
    GameStatus status;
};

enum class Actor { Placement, Robber, Cops };
std::string actor_name(Actor a);

struct TraceRecord {
    std::int64_t turn = 0;
    Actor actor = Actor::Placement;
    Point robber;
    std::vector<std::optional<Point>> cops;
    PotentialVector potentials;
    MatchState matched;
    std::string status;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

nlohmann::ordered_json to_json(const TraceRecord& record);
TraceRecord trace_record_from_json(const nlohmann::json& j);
// One JSON object per line.
std::string to_ndjson(const std::vector<TraceRecord>& trace);

// Sum over the roster of the initial potentials.
Coord capture_bound(const GameState& initial);

// Single-robber state machine: placement, then alternating half-turns.
class Game {
public:
    // Places the robber and selects the roster (best effort for losing sets).
    // Cops listed in `exclude` are never selected.
    Game(CopSet copset, Point robber_start, bool check_invariants = false, std::span<const Point> exclude = {});

    const GameState& state() const noexcept { return state_; }
    const CopSet& copset() const noexcept { return copset_; }
    Coord bound() const noexcept { return bound_; }
    bool winning_roster() const noexcept { return state_.roster.complete(); }

    // Robber half-turn; increments the turn counter. Returns true on capture.
    bool robber_move(const Move& move);
    // Cops half-turn. Returns true on capture.
    bool cops_move();
    // Both half-turns.
    void play_turn(const Move& move);

    void resign();
    void reach_horizon();

    // Static cops at these points have been claimed by another team.
    void set_reserved(std::vector<Point> reserved) { reserved_ = std::move(reserved); }
    // Mark capture by a cop this game does not own.
    void capture_by_foreign(std::int64_t turn);

    TraceRecord record(Actor actor) const;

private:
    void refresh();
    void check_capture_after_robber();
    void check_invariants(const PotentialVector& before) const;

    CopSet copset_;
    GameState state_;
    Point last_robber_prev_;
    Move last_robber_move_ = Move::stay();
    PotentialVector turn_start_potentials_;
    Coord bound_ = 0;
    bool check_invariants_;
    std::vector<Point> reserved_;
};

struct GameResult {
    GameState final_state;
    std::vector<TraceRecord> trace;
    Coord bound = 0;
};

// Runs until capture or max_turns full turns.
GameResult run_game(const GameConfig& config);

struct RobberEntry {
    Point start;
    RobberPolicy policy;
};

struct RobberOutcome {
    Point start;
    ActiveCopRoster roster;
    Coord bound = 0;
    GameStatus status;
    Point final_position;
};

struct MultiResult {
    std::vector<RobberOutcome> robbers;
    std::int64_t turns = 0;
};

// One disjoint team per robber, chosen greedily in robber order. All robbers
// move in the same half-turn; each team answers only its own robber.
MultiResult run_multi(const CopSet& copset, const std::vector<RobberEntry>& robbers, std::int64_t max_turns,
                      std::uint64_t seed = 0, bool check_invariants = false);

}  // namespace coplattice
