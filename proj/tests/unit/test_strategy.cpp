#include <doctest.h>

#include "coplattice/errors.hpp"
#include "coplattice/strategy.hpp"

#include <set>

using namespace coplattice;

namespace {

ActiveCopRoster roster_of(std::size_t dim, const std::vector<std::pair<Direction, Point>>& cops) {
    ActiveCopRoster r(dim);
    for (const auto& [d, p] : cops) r[d] = ActiveCop{p, p};
    return r;
}

// Exhaustive oracle: max over moves of min distance, first in candidate order.
Move brute_greedy(const Point& robber, const std::vector<Point>& cops) {
    std::optional<Move> best;
    Coord best_score = -1;
    for (const auto& mv : candidate_moves(robber.dim())) {
        const auto next = mv.apply(robber);
        Coord score = std::numeric_limits<Coord>::max();
        for (const auto& c : cops) score = std::min(score, l1_distance(next, c));
        if (score > best_score) {
            best_score = score;
            best = mv;
        }
    }
    return *best;
}

}  // namespace

TEST_CASE("selection examples") {
    const auto t1 = preset_copset("theorem1", 2);
    auto r = select_active_cops(t1, {1, 1});
    CHECK(r[Direction{0, 1}]->start == Point{4, 0});
    CHECK(r[Direction{0, -1}]->start == Point{-4, 0});
    CHECK(r[Direction{1, 1}]->start == Point{0, 4});
    CHECK(r[Direction{1, -1}]->start == Point{0, -4});

    r = select_active_cops(t1, {0, 0});
    CHECK(r.starts() == std::vector<Point>{{2, 0}, {-2, 0}, {0, 2}, {0, -2}});

    const auto sub = preset_copset("sublattice", 2);
    const Point origin{0, 0};
    r = select_active_cops(sub, origin);
    const auto starts = r.starts();
    CHECK(std::set<Point>(starts.begin(), starts.end()).size() == 4);
    for (auto d : all_directions(2)) {
        CHECK(sub.contains(r[d]->start));
        CHECK(shell_index(r[d]->start, d, origin) >= 1);
    }
    // Least shell first, then nearest, then lexicographic.
    CHECK(r[Direction{1, 1}]->start == Point{-1, 2});

    CHECK_THROWS_AS(select_active_cops(preset_copset("halfplane", 2), origin), BoundedDirection);
    CHECK(selection_threshold({1, -1}) == 3);
}

TEST_CASE("selected cops sit on robber-relative shell >= 1") {
    std::mt19937_64 rng(3);
    for (std::size_t dim : {1u, 2u, 3u}) {
        const auto spec = preset_copset("theorem1", dim);
        for (int t = 0; t < 50; ++t) {
            Point r(dim);
            for (std::size_t j = 0; j < dim; ++j) r[j] = static_cast<Coord>(rng() % 61) - 30;
            const auto roster = select_active_cops(spec, r);
            auto starts = roster.starts();
            CHECK(std::set<Point>(starts.begin(), starts.end()).size() == 2 * dim);
            for (auto d : all_directions(dim)) CHECK(shell_index(roster[d]->start, d, r) >= 1);
        }
    }
}

TEST_CASE("best-effort roster for losing sets") {
    const auto hp = preset_copset("halfplane", 2);
    const auto r = select_best_effort_roster(hp, {0, -2});
    CHECK(r[Direction{0, 1}].has_value());
    REQUIRE(r[Direction{1, -1}].has_value());
    // Largest robber-relative shell available in a bounded direction is -2.
    CHECK(shell_index(r[Direction{1, -1}]->start, Direction{1, -1}, {0, -2}) == -2);
    CHECK(r.complete());

    const auto empty = select_best_effort_roster(preset_copset("empty", 2), {0, 0});
    for (const auto& s : empty.slots()) CHECK_FALSE(s.has_value());
    CHECK_FALSE(empty.complete());
}

TEST_CASE("cop turn examples") {
    const auto roster =
        roster_of(2, {{{0, 1}, {4, 0}}, {{0, -1}, {-4, 0}}, {{1, 1}, {0, 4}}, {{1, -1}, {0, -4}}});
    const auto moves = cop_turn(roster, {1, 1}, Move::step(0, 1));
    CHECK(moves[Direction{1, 1}.index()]->apply({0, 4}) == Point{1, 4});
    CHECK(moves[Direction{0, 1}.index()]->apply({4, 0}) == Point{4, 1});

    const auto line = roster_of(1, {{{0, 1}, {2}}, {{0, -1}, {-2}}});
    const auto m1 = cop_turn(line, {0}, Move::step(0, 1));
    CHECK(m1[0]->apply({2}) == Point{1});

    auto caught = line;
    caught[Direction{0, 1}]->position = Point{0};
    CHECK_THROWS_AS(cop_turn(caught, {0}, Move::stay()), ContractViolation);
}

TEST_CASE("mirror exactness and potential descent") {
    std::mt19937_64 rng(11);
    for (std::size_t dim : {1u, 2u, 3u}) {
        const auto spec = preset_copset("theorem1", dim);
        for (int game = 0; game < 40; ++game) {
            Point robber(dim);
            for (std::size_t j = 0; j < dim; ++j) robber[j] = static_cast<Coord>(rng() % 21) - 10;
            auto roster = select_active_cops(spec, robber);
            auto moves = candidate_moves(dim);
            for (int turn = 0; turn < 500; ++turn) {
                const auto mv = moves[rng() % moves.size()];
                const auto next = mv.apply(robber);
                const auto occupied = roster.positions();
                if (std::find(occupied.begin(), occupied.end(), next) != occupied.end()) break;
                const auto before = potentials(roster, next);
                const auto cmoves = cop_turn(roster, robber, mv);
                auto after_roster = roster;
                apply_cop_moves(after_roster, cmoves);
                const auto after = potentials(after_roster, next);
                bool strict = false, captured = false;
                for (auto d : all_directions(dim)) {
                    const auto i = d.index();
                    // Cops answer a move the robber already made, so compare
                    // against the potential at the start of the robber's turn.
                    const Coord prev = l1_distance(roster[d]->position, robber);
                    REQUIRE(*after[i] <= prev);
                    strict = strict || *after[i] < prev;
                    captured = captured || *after[i] == 0;
                    if (mv.direction() && mv.direction()->axis != d.axis) {
                        for (std::size_t j = 0; j < dim; ++j)
                            REQUIRE(after_roster[d]->position[j] - next[j] == roster[d]->position[j] - robber[j]);
                    }
                    if (*after[i] > 0) REQUIRE(shell_index(after_roster[d]->position, d, next) >= 1);
                }
                (void)before;
                REQUIRE(strict);
                roster = after_roster;
                robber = next;
                if (captured) break;
            }
        }
    }
}

TEST_CASE("interception predicate") {
    CHECK_FALSE(interception_predicate({0, 3}, {0, -2}, {1, -1}));
    CHECK(shell_index({0, 3}, {1, -1}, {0, -2}) == -5);
    CHECK(interception_predicate({5, 0}, {0, 0}, {0, 1}));
    for (Coord a = 1; a <= 50; ++a)
        CHECK_FALSE(interception_predicate({3 * a, 2 * a, 2 * a}, {0, 0, 0}, {0, 1}));
}

TEST_CASE("interception predicate matches a pursuit oracle") {
    // A cop at c catches the runner at start + k*dir iff some k >= 0 has
    // l1(c, start + k*dir) <= k (the cop moves after the robber, one step per turn).
    std::mt19937_64 rng(5);
    for (int t = 0; t < 3000; ++t) {
        const std::size_t dim = 1 + rng() % 3;
        Point c(dim), s(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            c[j] = static_cast<Coord>(rng() % 41) - 20;
            s[j] = static_cast<Coord>(rng() % 41) - 20;
        }
        const auto d = Direction::from_index(rng() % (2 * dim));
        bool reach = false;
        Point r = s;
        for (Coord k = 0; k <= 200 && !reach; ++k) {
            reach = l1_distance(c, r) <= k;
            r = Move::step(d).apply(r);
        }
        CAPTURE(c.str());
        CAPTURE(s.str());
        CHECK(interception_predicate(c, s, d) == reach);
    }
}

TEST_CASE("greedy evader") {
    auto greedy = [](const Point& robber, const std::vector<Point>& cops) {
        ActiveCopRoster r(robber.dim());
        for (std::size_t i = 0; i < cops.size(); ++i) r[Direction::from_index(i)] = ActiveCop{cops[i], cops[i]};
        return greedy_evader_move(robber, r);
    };
    CHECK(greedy({0, 0}, {{2, 0}, {-2, 0}, {0, 2}, {0, -2}}).is_stay());
    CHECK(greedy({0, 0}, {{3, 0}}) == Move::step(0, -1));
    CHECK(greedy({0, 0}, {{1, 0}, {0, 1}}) == Move::step(0, -1));
    CHECK(greedy({0, 0}, {{1, 0}, {0, 1}}) == brute_greedy({0, 0}, {{1, 0}, {0, 1}}));

    std::mt19937_64 rng(9);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t dim = 1 + rng() % 3;
        Point robber(dim);
        std::vector<Point> cops;
        for (std::size_t i = 0; i < 2 * dim; ++i) {
            Point c(dim);
            for (std::size_t j = 0; j < dim; ++j) c[j] = static_cast<Coord>(rng() % 9) - 4;
            cops.push_back(c);
        }
        CHECK(greedy(robber, cops) == brute_greedy(robber, cops));
    }
}

TEST_CASE("robber agents") {
    const ActiveCopRoster empty(2);
    RobberAgent runner(AxisRunner{{1, -1}}, 0);
    CHECK(runner.next({0, 0}, empty) == Move::step(1, -1));

    RobberAgent script(Scripted{{Move::step(0, 1), Move::step(1, 1)}}, 0);
    CHECK(script.next({0, 0}, empty) == Move::step(0, 1));
    CHECK(script.next({0, 0}, empty) == Move::step(1, 1));
    CHECK(script.next({0, 0}, empty).is_stay());

    RobberAgent a(RandomWalk{}, 42), b(RandomWalk{42}, 7), c(RandomWalk{}, 43);
    std::vector<Move> ma, mb, mc;
    for (int i = 0; i < 50; ++i) {
        ma.push_back(a.next({0, 0}, empty));
        mb.push_back(b.next({0, 0}, empty));
        mc.push_back(c.next({0, 0}, empty));
    }
    CHECK(ma == mb);
    CHECK(ma != mc);

    RobberAgent ext(External{}, 0);
    CHECK_THROWS_AS(ext.next({0, 0}, empty), ContractViolation);
    CHECK(policy_name(GreedyEvader{}) == "greedy");
}
