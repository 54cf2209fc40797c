#include <doctest.h>

#include "coplattice/engine.hpp"
#include "coplattice/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

using namespace coplattice;

namespace {

// Recompute potentials and match flags from the recorded positions.
void validate_trace(const std::vector<TraceRecord>& trace) {
    for (const auto& rec : trace) {
        for (std::size_t i = 0; i < rec.cops.size(); ++i) {
            const auto d = Direction::from_index(i);
            REQUIRE(rec.cops[i].has_value() == rec.potentials[i].has_value());
            if (!rec.cops[i]) continue;
            REQUIRE(*rec.potentials[i] == l1_distance(*rec.cops[i], rec.robber));
            REQUIRE(*rec.matched[i] == is_matched(*rec.cops[i], rec.robber, d));
        }
    }
}

}  // namespace

TEST_CASE("n = 1 runner is caught on turn 1") {
    GameConfig cfg{preset_copset("theorem1", 1), Point{0}, AxisRunner{{0, 1}}};
    const auto res = run_game(cfg);
    CHECK(res.final_state.status.captured());
    CHECK(res.final_state.status.turn == 1);
    CHECK(res.final_state.status.at == Point{1});
    CHECK(res.bound == 4);
}

TEST_CASE("golden greedy game in Z^2") {
    GameConfig cfg{preset_copset("theorem1", 2), Point{1, 1}, GreedyEvader{}};
    cfg.check_invariants = true;
    const auto res = run_game(cfg);
    CHECK(res.bound == 20);
    REQUIRE(res.final_state.status.captured());
    CHECK(res.final_state.status.turn <= 20);
    validate_trace(res.trace);

    const auto golden = to_ndjson(res.trace);
    CHECK(golden.substr(0, golden.find('\n')) ==
          R"({"turn":0,"actor":"placement","robber":[1,1],"cops":{"X1+":[4,0],"X1-":[-4,0],"X2+":[0,4],"X2-":[0,-4]},)"
          R"("potentials":{"X1+":4,"X1-":6,"X2+":4,"X2-":6},"matched":{"X1+":false,"X1-":false,"X2+":false,"X2-":false},)"
          R"("status":"running"})");
    // Frozen outcome of this deterministic game.
    CHECK(res.final_state.status.str() == "captured:X1+");
    CHECK(res.final_state.status.turn == 6);
    CHECK(res.trace.size() == 13);
}

TEST_CASE("capture bound examples") {
    GameState s;
    s.potentials = {2, 2, 2, 2};
    CHECK(capture_bound(s) == 8);
    Game g(preset_copset("theorem1", 2), {1, 1});
    CHECK(capture_bound(g.state()) == 20);
    Game line(preset_copset("theorem1", 1), {0});
    CHECK(line.bound() == 4);
}

TEST_CASE("half-plane runner escapes") {
    GameConfig cfg{preset_copset("halfplane", 2), Point{0, -2}, AxisRunner{{1, -1}}};
    const auto res = run_game(cfg);
    CHECK(res.final_state.status.kind == GameStatus::Kind::HorizonReached);
    CHECK(res.final_state.turn == 10'000);
    CHECK(res.final_state.robber == Point{0, -10'002});
    CHECK(res.trace.back().status == "horizon");
    for (const auto& rec : res.trace) CHECK(rec.status != "captured:static");
}

TEST_CASE("capture semantics") {
    // Placing the robber on a cop ends the game at turn 0.
    Game on_cop(preset_copset("theorem1", 2), {4, 0});
    CHECK(on_cop.state().status.captured());
    CHECK(on_cop.state().status.turn == 0);

    // Stepping onto a frozen cop.
    Game frozen(preset_copset("theorem1", 2), {0, 3});
    CHECK(frozen.state().roster[Direction{1, -1}]->start == Point{0, -4});
    CHECK(frozen.robber_move(Move::step(1, -1)));
    CHECK(frozen.state().status.str() == "captured:static");
    CHECK_THROWS_AS(frozen.cops_move(), ContractViolation);

    // Stepping onto an active cop credits its direction.
    Game active(preset_copset("theorem1", 1), {1});
    CHECK(active.state().roster[Direction{0, 1}]->position == Point{2});
    active.play_turn(Move::step(0, 1));
    CHECK(active.state().status.captured());
    CHECK(active.state().status.by == Direction{0, 1});

    Game resign(preset_copset("theorem1", 2), {0, 0});
    resign.resign();
    CHECK(resign.state().status.str() == "resigned");
}

TEST_CASE("illegal policies are rejected") {
    GameConfig cfg{preset_copset("theorem1", 2), Point{0, 0}, External{}};
    CHECK_THROWS_AS(run_game(cfg), ContractViolation);
    cfg.policy = GreedyEvader{};
    cfg.max_turns = 0;
    CHECK_THROWS_AS(run_game(cfg), ContractViolation);
}

TEST_CASE("trace json round trip") {
    GameConfig cfg{preset_copset("halfplane", 2), Point{3, -3}, RandomWalk{}, 40, 17};
    const auto res = run_game(cfg);
    validate_trace(res.trace);
    std::istringstream lines(to_ndjson(res.trace));
    std::string line;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        const auto back = trace_record_from_json(nlohmann::json::parse(line));
        CHECK(back == res.trace.at(i++));
    }
    CHECK(i == res.trace.size());
}

TEST_CASE("replay is byte-identical") {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        GameConfig cfg{preset_copset("theorem1", 3), Point{5, -7, 2}, RandomWalk{}, 10'000, seed};
        CHECK(to_ndjson(run_game(cfg).trace) == to_ndjson(run_game(cfg).trace));
    }
}

TEST_CASE("multi-robber teams") {
    const auto spec = preset_copset("theorem1", 2);
    const auto two = run_multi(spec, {{Point{0, 0}, GreedyEvader{}}, {Point{10, 10}, GreedyEvader{}}}, 10'000);
    REQUIRE(two.robbers.size() == 2);
    CHECK(two.robbers[0].roster.starts() == std::vector<Point>{{2, 0}, {-2, 0}, {0, 2}, {0, -2}});
    CHECK(two.robbers[1].roster.starts() == std::vector<Point>{{32, 0}, {-32, 0}, {0, 32}, {0, -32}});

    const auto three = run_multi(spec,
                                 {{Point{0, 0}, GreedyEvader{}},
                                  {Point{1, 1}, GreedyEvader{}},
                                  {Point{-3, 2}, GreedyEvader{}}},
                                 10'000, 0, true);
    std::set<Point> seen;
    for (const auto& r : three.robbers) {
        CHECK(r.status.captured());
        CHECK(r.status.turn <= r.bound);
        for (const auto& p : r.roster.starts()) CHECK(seen.insert(p).second);
    }

    // A single robber plays exactly like run_game.
    const auto single = run_multi(spec, {{Point{2, -3}, GreedyEvader{}}}, 10'000);
    const auto ref = run_game({spec, Point{2, -3}, GreedyEvader{}});
    CHECK(single.robbers[0].status.turn == ref.final_state.status.turn);
    CHECK(single.robbers[0].final_position == ref.final_state.robber);
    CHECK(single.robbers[0].status.str() == ref.final_state.status.str());
}

TEST_CASE("capture universality sample with invariants") {
    std::mt19937_64 rng(2024);
    for (std::size_t dim : {1u, 2u, 3u}) {
        const auto spec = preset_copset("theorem1", dim);
        for (int t = 0; t < 20; ++t) {
            Point r(dim);
            for (std::size_t j = 0; j < dim; ++j) r[j] = static_cast<Coord>(rng() % 31) - 15;
            if (spec.contains(r)) continue;
            std::vector<RobberPolicy> policies{GreedyEvader{}, RandomWalk{t + 0ull}};
            for (auto d : all_directions(dim)) policies.push_back(AxisRunner{d});
            for (const auto& pol : policies) {
                GameConfig cfg{spec, r, pol, 100'000, 0, true};
                const auto res = run_game(cfg);
                CAPTURE(r.str());
                CAPTURE(policy_name(pol));
                REQUIRE(res.final_state.status.captured());
                CHECK(res.final_state.status.turn <= res.bound);
            }
        }
    }
}

TEST_CASE("golden trace file") {
    std::ifstream in(std::string(COPLATTICE_GOLDEN_DIR) + "/theorem1_greedy_1_1.ndjson");
    REQUIRE(in);
    std::stringstream want;
    want << in.rdbuf();
    GameConfig cfg{preset_copset("theorem1", 2), Point{1, 1}, GreedyEvader{}};
    CHECK(to_ndjson(run_game(cfg).trace) == want.str());
}
