#include "coplattice/strategy.hpp"

#include "coplattice/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace coplattice {

bool ActiveCopRoster::complete() const noexcept {
    return std::all_of(slots_.begin(), slots_.end(), [](const auto& s) { return s.has_value(); });
}

std::vector<Point> ActiveCopRoster::starts() const {
    std::vector<Point> out;
    for (const auto& s : slots_)
        if (s) out.push_back(s->start);
    return out;
}

std::vector<Point> ActiveCopRoster::positions() const {
    std::vector<Point> out;
    for (const auto& s : slots_)
        if (s) out.push_back(s->position);
    return out;
}

bool is_matched(const Point& cop, const Point& robber, Direction dir) {
    require_same_dim(cop, robber);
    for (std::size_t j = 0; j < cop.dim(); ++j)
        if (static_cast<int>(j) != dir.axis && cop[j] != robber[j]) return false;
    return true;
}

PotentialVector potentials(const ActiveCopRoster& roster, const Point& robber) {
    PotentialVector out(roster.slots().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        if (const auto& s = roster.slots()[i]) out[i] = l1_distance(s->position, robber);
    return out;
}

MatchState match_state(const ActiveCopRoster& roster, const Point& robber) {
    MatchState out(roster.slots().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        if (const auto& s = roster.slots()[i]) out[i] = is_matched(s->position, robber, Direction::from_index(i));
    return out;
}

Coord selection_threshold(const Point& robber_start) { return l1_norm(robber_start) + 1; }

namespace {

std::vector<Point> with_exclusions(std::span<const Point> exclude, const ActiveCopRoster& roster) {
    std::vector<Point> out(exclude.begin(), exclude.end());
    for (auto& p : roster.starts()) out.push_back(std::move(p));
    return out;
}

// Cop of largest shell about `apex` in `dir`, found by bisecting on the
// minimum shell. The census supremum m0 about the origin brackets it within
// m0 +- ||apex||_1.
std::optional<Point> best_shell_cop(const CopSet& spec, Direction dir, const Point& apex, Coord m0,
                                    std::span<const Point> exclude) {
    const Coord r = l1_norm(apex);
    Coord lo = m0 - r, hi = m0 + r;
    auto found = try_find_cop_in_cone(spec, dir, apex, lo, exclude);
    if (!found) return std::nullopt;
    // Invariant: some cop has shell >= lo; none has shell > hi.
    while (lo < hi) {
        Coord mid = lo + (hi - lo + 1) / 2;
        if (auto p = try_find_cop_in_cone(spec, dir, apex, mid, exclude)) {
            lo = mid;
            found = p;
        } else {
            hi = mid - 1;
        }
    }
    return found;
}

}  // namespace

ActiveCopRoster select_active_cops(const CopSet& spec, const Point& robber_start, std::span<const Point> exclude) {
    require_same_dim(Point(spec.dim()), robber_start);
    ActiveCopRoster roster(spec.dim());
    const Point origin = Point::origin(spec.dim());
    const Coord threshold = selection_threshold(robber_start);
    for (auto d : all_directions(spec.dim())) {
        auto taken = with_exclusions(exclude, roster);
        Point c = find_cop_in_cone(spec, d, origin, threshold, taken);
        roster[d] = ActiveCop{c, c};
    }
    return roster;
}

ActiveCopRoster select_best_effort_roster(const CopSet& spec, const Point& robber_start,
                                          std::span<const Point> exclude) {
    require_same_dim(Point(spec.dim()), robber_start);
    ActiveCopRoster roster(spec.dim());
    const Point origin = Point::origin(spec.dim());
    const Coord threshold = selection_threshold(robber_start);
    const auto cen = census(spec);
    for (auto d : all_directions(spec.dim())) {
        auto taken = with_exclusions(exclude, roster);
        auto c = try_find_cop_in_cone(spec, d, origin, threshold, taken);
        if (!c && !cen[d].unbounded && cen[d].max_shell)
            c = best_shell_cop(spec, d, robber_start, *cen[d].max_shell, taken);
        if (c) roster[d] = ActiveCop{*c, *c};
    }
    return roster;
}

namespace {

int toward(Coord from, Coord to) { return to > from ? 1 : (to < from ? -1 : 0); }

// Step on the least-index mismatched axis other than dir.axis, toward the robber;
// if matched, step along dir.axis toward the robber; Stay if on the robber.
Move progress_move(const Point& cop, const Point& robber, Direction dir) {
    for (std::size_t j = 0; j < cop.dim(); ++j) {
        if (static_cast<int>(j) == dir.axis || cop[j] == robber[j]) continue;
        return Move::step(static_cast<int>(j), toward(cop[j], robber[j]));
    }
    const auto m = static_cast<std::size_t>(dir.axis);
    int s = toward(cop[m], robber[m]);
    return s == 0 ? Move::stay() : Move::step(dir.axis, s);
}

}  // namespace

std::vector<std::optional<Move>> cop_turn(const ActiveCopRoster& roster, const Point& robber_prev,
                                          const Move& robber_move) {
    const Point robber = robber_move.apply(robber_prev);
    std::vector<std::optional<Move>> moves(roster.slots().size());
    for (const auto& s : roster.slots())
        if (s && s->position == robber) throw ContractViolation("cop_turn called after capture");
    for (std::size_t i = 0; i < moves.size(); ++i) {
        const auto& slot = roster.slots()[i];
        if (!slot) continue;
        const Direction d = Direction::from_index(i);
        const auto& step = robber_move.direction();
        if (step && step->axis != d.axis) moves[i] = Move::step(*step);  // mirror
        else moves[i] = progress_move(slot->position, robber, d);
    }
    return moves;
}

void apply_cop_moves(ActiveCopRoster& roster, const std::vector<std::optional<Move>>& moves) {
    for (std::size_t i = 0; i < moves.size(); ++i) {
        auto& slot = roster[Direction::from_index(i)];
        if (slot && moves[i]) slot->position = moves[i]->apply(slot->position);
    }
}

bool interception_predicate(const Point& cop, const Point& start, Direction dir) {
    return shell_index(cop, dir, start) >= 0;
}

std::vector<Move> candidate_moves(std::size_t dim) {
    std::vector<Move> out{Move::stay()};
    for (std::size_t a = 0; a < dim; ++a) {
        out.push_back(Move::step(static_cast<int>(a), -1));
        out.push_back(Move::step(static_cast<int>(a), 1));
    }
    return out;
}

Move greedy_evader_move(const Point& robber, const ActiveCopRoster& roster) {
    const auto cops = roster.positions();
    Move best = Move::stay();
    Coord best_score = std::numeric_limits<Coord>::min();
    for (const auto& mv : candidate_moves(robber.dim())) {
        const Point next = mv.apply(robber);
        Coord score = std::numeric_limits<Coord>::max();
        for (const auto& c : cops) score = std::min(score, l1_distance(next, c));
        if (score > best_score) {
            best_score = score;
            best = mv;
        }
    }
    return best;
}

std::string policy_name(const RobberPolicy& policy) {
    struct Namer {
        std::string operator()(const AxisRunner& r) const { return "runner:" + r.direction.name(); }
        std::string operator()(const GreedyEvader&) const { return "greedy"; }
        std::string operator()(const Scripted&) const { return "scripted"; }
        std::string operator()(const RandomWalk&) const { return "random"; }
        std::string operator()(const External&) const { return "external"; }
    };
    return std::visit(Namer{}, policy);
}

RobberAgent::RobberAgent(RobberPolicy policy, std::uint64_t game_seed) : policy_(std::move(policy)) {
    std::uint64_t seed = game_seed;
    if (const auto* rw = std::get_if<RandomWalk>(&policy_); rw && rw->seed) seed = *rw->seed;
    rng_.seed(seed);
}

Move RobberAgent::next(const Point& robber, const ActiveCopRoster& roster) {
    if (const auto* r = std::get_if<AxisRunner>(&policy_)) return Move::step(r->direction);
    if (std::holds_alternative<GreedyEvader>(policy_)) return greedy_evader_move(robber, roster);
    if (const auto* s = std::get_if<Scripted>(&policy_))
        return script_pos_ < s->moves.size() ? s->moves[script_pos_++] : Move::stay();
    if (std::holds_alternative<RandomWalk>(policy_)) {
        const auto options = candidate_moves(robber.dim());
        return options[rng_() % options.size()];
    }
    throw ContractViolation("external robber policy has no move generator");
}

}  // namespace coplattice
