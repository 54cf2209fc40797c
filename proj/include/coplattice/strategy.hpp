#pragma once

#include "coplattice/copset.hpp"
#include "coplattice/lattice.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace coplattice {

struct ActiveCop {
    Point start;
    Point position;
};

// One moving cop per direction; every other cop stays put. Slots are vacant
// only for losing configurations that cannot supply a cop.
class ActiveCopRoster {
public:
    explicit ActiveCopRoster(std::size_t dim = 0) : dim_(dim), slots_(2 * dim) {}

    std::size_t dim() const noexcept { return dim_; }
    const std::optional<ActiveCop>& operator[](Direction d) const { return slots_.at(d.index()); }
    std::optional<ActiveCop>& operator[](Direction d) { return slots_.at(d.index()); }
    const std::vector<std::optional<ActiveCop>>& slots() const noexcept { return slots_; }

    bool complete() const noexcept;
    std::vector<Point> starts() const;
    std::vector<Point> positions() const;

private:
    std::size_t dim_;
    std::vector<std::optional<ActiveCop>> slots_;
};

// Per-direction L1 distance from the active cop to the robber (vacant -> nullopt).
using PotentialVector = std::vector<std::optional<Coord>>;
// Per-direction coordinate-match flag (vacant -> nullopt).
using MatchState = std::vector<std::optional<bool>>;

// Every coordinate except dir.axis agrees with the robber's.
bool is_matched(const Point& cop, const Point& robber, Direction dir);

PotentialVector potentials(const ActiveCopRoster& roster, const Point& robber);
MatchState match_state(const ActiveCopRoster& roster, const Point& robber);

// Origin-shell every selected cop must reach: ||start||_1 + 1. Together with
// the shift bound this puts each cop on robber-relative shell >= 1.
Coord selection_threshold(const Point& robber_start);

// One cop per direction, in X1+, X1-, X2+, ... order, each chosen by
// find_cop_in_cone about the origin at selection_threshold and excluding
// earlier choices plus `exclude`. Throws BoundedDirection for losing sets.
ActiveCopRoster select_active_cops(const CopSet& spec, const Point& robber_start,
                                   std::span<const Point> exclude = {});

// As select_active_cops, but a direction without a qualifying cop gets the
// cop of largest robber-relative shell instead (or stays vacant when there is
// none). Used to let losing configurations play on to a horizon.
ActiveCopRoster select_best_effort_roster(const CopSet& spec, const Point& robber_start,
                                          std::span<const Point> exclude = {});

// Cops' response to the robber's move from robber_prev. Vacant slots get
// nullopt. Throws ContractViolation if the robber is already caught.
std::vector<std::optional<Move>> cop_turn(const ActiveCopRoster& roster, const Point& robber_prev,
                                          const Move& robber_move);

void apply_cop_moves(ActiveCopRoster& roster, const std::vector<std::optional<Move>>& moves);

// Whether a cop sitting at `cop` can ever catch a robber that starts at `start`
// and steps in `dir` every turn: true iff shell_index(cop, dir, start) >= 0.
bool interception_predicate(const Point& cop, const Point& start, Direction dir);

// Move maximizing the minimum L1 distance to the active cops afterwards.
// Ties: Stay, then (axis, sign) lexicographically with - before +.
Move greedy_evader_move(const Point& robber, const ActiveCopRoster& roster);

// Stay, X1-, X1+, X2-, X2+, ...
std::vector<Move> candidate_moves(std::size_t dim);

struct AxisRunner {
    Direction direction;
};
struct GreedyEvader {};
struct Scripted {
    std::vector<Move> moves;  // Stay once exhausted
};
struct RandomWalk {
    std::optional<std::uint64_t> seed;  // falls back to the game seed
};
struct External {};

using RobberPolicy = std::variant<AxisRunner, GreedyEvader, Scripted, RandomWalk, External>;

std::string policy_name(const RobberPolicy& policy);

// Stateful driver for a robber policy.
class RobberAgent {
public:
    RobberAgent(RobberPolicy policy, std::uint64_t game_seed);

    // External agents cannot choose moves; throws ContractViolation.
    Move next(const Point& robber, const ActiveCopRoster& roster);

    const RobberPolicy& policy() const noexcept { return policy_; }

private:
    RobberPolicy policy_;
    std::mt19937_64 rng_;
    std::size_t script_pos_ = 0;
};

}  // namespace coplattice
