#include <doctest.h>

#include "coplattice/copset.hpp"
#include "coplattice/errors.hpp"

#include <functional>
#include <random>
#include <tuple>

using namespace coplattice;

namespace {

// Calls fn on every point of [-m, m]^dim.
void for_each_in_box(std::size_t dim, Coord m, const std::function<void(const Point&)>& fn) {
    Point p(std::vector<Coord>(dim, -m));
    for (;;) {
        fn(p);
        std::size_t j = 0;
        while (j < dim && p[j] == m) p[j++] = -m;
        if (j == dim) return;
        ++p[j];
    }
}

// Windowed max shell per direction for each window radius (radii ascending).
std::vector<std::vector<std::optional<Coord>>> scan_max_shells(const CopSet& spec, const std::vector<Coord>& radii) {
    const auto dirs = all_directions(spec.dim());
    std::vector<std::vector<std::optional<Coord>>> out(radii.size(), std::vector<std::optional<Coord>>(dirs.size()));
    const Point origin = Point::origin(spec.dim());
    for_each_in_box(spec.dim(), radii.back(), [&](const Point& p) {
        if (!spec.contains(p)) return;
        const Coord c = chebyshev_norm(p);
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const Coord s = shell_index(p, dirs[i], origin);
            for (std::size_t w = 0; w < radii.size(); ++w) {
                if (c > radii[w]) continue;
                auto& best = out[w][i];
                if (!best || s > *best) best = s;
            }
        }
    });
    return out;
}

std::optional<Point> brute_find(const CopSet& spec, Direction dir, const Point& apex, Coord min_shell,
                                const std::vector<Point>& exclude, Coord window) {
    std::optional<std::tuple<Coord, Coord, Point>> best;
    for_each_in_box(spec.dim(), window, [&](const Point& off) {
        Point p = apex;
        for (std::size_t j = 0; j < p.dim(); ++j) p[j] += off[j];
        const Coord s = shell_index(p, dir, apex);
        if (s < min_shell || !spec.contains(p)) return;
        if (std::find(exclude.begin(), exclude.end(), p) != exclude.end()) return;
        std::tuple<Coord, Coord, Point> key{s, l1_distance(p, apex), p};
        if (!best || key < *best) best = key;
    });
    if (!best) return std::nullopt;
    return std::get<2>(*best);
}

std::uint64_t brute_count(const CopSet& spec, Coord m) {
    std::uint64_t count = 0;
    for_each_in_box(spec.dim(), m, [&](const Point& p) { count += spec.contains(p) ? 1 : 0; });
    return count;
}

std::vector<CopSet> sample_specs_2d() {
    return {
        preset_copset("theorem1", 2),
        preset_copset("halfplane", 2),
        preset_copset("sublattice", 2),
        preset_copset("finite", 2),
        CopSet(2, {ExplicitFinite{{Point{5, 5}, Point{-3, 2}, Point{0, -7}}}}),
        CopSet(2, {AxisGeometric{0, 3, {true, false}, 0}}),
        CopSet(2, {AxisArithmetic{1, 3, 2, {false, true}}}),
        CopSet(2, {Sublattice{{3, 2}, {1, 1}}}),
        CopSet(2, {HalfSpace{0, -1, 3}}),
        CopSet(2, {HalfSpace{1, 1, -4}, Sublattice{{2, 3}, {0, 2}}, AxisGeometric{1, 2, {false, true}, 2}}),
        CopSet(2, {AxisArithmetic{0, 4, 1, {}}, ExplicitFinite{{Point{1, 1}}}, HalfSpace{1, -1, 6}}),
    };
}

std::vector<CopSet> sample_specs_3d() {
    return {
        preset_copset("theorem1", 3),
        preset_copset("halfplane", 3),
        CopSet(3, {Sublattice{{2, 1, 3}, {1, 0, 2}}}),
        CopSet(3, {AxisArithmetic{2, 5, 3, {}}, ExplicitFinite{{Point{4, -4, 1}}}}),
        CopSet(3, {HalfSpace{0, 1, 2}, AxisGeometric{2, 2, {false, true}, 0}}),
    };
}

}  // namespace

TEST_CASE("contains") {
    const auto t1 = preset_copset("theorem1", 2);
    CHECK(t1.contains({4, 0}));
    CHECK_FALSE(t1.contains({3, 0}));
    CHECK_FALSE(t1.contains({1, 0}));
    CHECK(t1.contains({0, -8}));
    CHECK(preset_copset("halfplane", 2).contains({-3, 1}));
    CHECK_FALSE(preset_copset("halfplane", 2).contains({-3, -1}));
    CHECK_THROWS_AS(t1.contains({1, 2, 3}), ContractViolation);
}

TEST_CASE("spec validation names the field") {
    auto field_of = [](auto&& make) {
        try {
            make();
        } catch (const SpecError& e) {
            return e.field();
        }
        return std::string("<no error>");
    };
    CHECK(field_of([] { CopSet(2, {Sublattice{{1, 2}, {0, 2}}}); }) == "generators[0].residues[1]");
    CHECK(field_of([] { CopSet(2, {AxisGeometric{0, 1, {}, 0}}); }) == "generators[0].base");
    CHECK(field_of([] { CopSet(2, {HalfSpace{0, 1, 0}, AxisGeometric{2, 2, {}, 0}}); }) == "generators[1].axis");
    CHECK(field_of([] { CopSet(2, {ExplicitFinite{{Point{1, 2, 3}}}}); }) == "generators[0].points[0]");
    CHECK(field_of([] { CopSet(2, {}); }) == "generators");
}

TEST_CASE("census examples") {
    const auto hp = census(preset_copset("halfplane", 2));
    CHECK(hp[Direction{0, 1}].unbounded);
    CHECK(hp[Direction{0, -1}].unbounded);
    CHECK(hp[Direction{1, 1}].unbounded);
    CHECK(hp[Direction{1, -1}] == CensusEntry::bounded(0));
    CHECK(census(preset_copset("theorem1", 2)).all_unbounded());

    const auto fin = census(CopSet(2, {ExplicitFinite{{Point{5, 5}}}}));
    CHECK(fin[Direction{0, 1}] == CensusEntry::bounded(0));
    CHECK(fin[Direction{1, 1}] == CensusEntry::bounded(0));
    CHECK(fin[Direction{0, -1}] == CensusEntry::bounded(-10));
    CHECK(fin[Direction{1, -1}] == CensusEntry::bounded(-10));

    const auto empty = census(preset_copset("empty", 2));
    for (const auto& e : empty.entries()) CHECK(e == CensusEntry::bounded(std::nullopt));
}

TEST_CASE("census agrees with window scans") {
    const std::vector<Coord> radii{25, 50, 100};
    auto check = [&](const CopSet& spec, const std::vector<Coord>& rs) {
        const auto c = census(spec);
        const auto scans = scan_max_shells(spec, rs);
        const auto dirs = all_directions(spec.dim());
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            CAPTURE(dirs[i].name());
            const auto& e = c[dirs[i]];
            if (e.unbounded) {
                for (std::size_t w = 1; w < rs.size(); ++w) {
                    REQUIRE(scans[w][i].has_value());
                    REQUIRE(scans[w - 1][i].has_value());
                    CHECK(*scans[w][i] > *scans[w - 1][i]);
                }
            } else {
                for (std::size_t w = 0; w < rs.size(); ++w) {
                    if (!scans[w][i]) continue;
                    REQUIRE(e.max_shell.has_value());
                    CHECK(*scans[w][i] <= *e.max_shell);
                }
                // All bounded suprema in these fixtures are attained near the origin.
                CHECK(scans.back()[i] == e.max_shell);
            }
        }
    };
    for (const auto& spec : sample_specs_2d()) check(spec, radii);
    for (const auto& spec : sample_specs_3d()) check(spec, {10, 20, 40});
}

TEST_CASE("classify") {
    CHECK(classify(preset_copset("theorem1", 2)).winning());
    CHECK(classify(preset_copset("sublattice", 2)).winning());
    CHECK(classify(preset_copset("theorem1", 1)).winning());
    CHECK(classify(preset_copset("theorem1", 3)).winning());

    const auto hp = classify(preset_copset("halfplane", 2));
    REQUIRE_FALSE(hp.winning());
    REQUIRE(hp.witness);
    CHECK(hp.witness->direction == Direction{1, -1});
    CHECK(hp.witness->bound_shell == 0);
    CHECK(hp.witness->start == Point{0, -2});

    const auto fin = classify(preset_copset("finite", 2));
    REQUIRE_FALSE(fin.winning());
    CHECK(fin.witness->direction == Direction{0, 1});
    CHECK(fin.witness->start == Point{2, 0});

    const auto one_axis = classify(CopSet(2, {AxisGeometric{0, 2, {}, 0}}));
    REQUIRE_FALSE(one_axis.winning());
    CHECK(one_axis.witness->direction == Direction{1, 1});

    const auto empty = classify(preset_copset("empty", 2));
    REQUIRE_FALSE(empty.winning());
    CHECK(empty.witness->bound_shell == 0);
    CHECK(empty.witness->start == Point{2, 0});

    for (const auto& spec : sample_specs_2d()) {
        const auto v = classify(spec);
        CHECK(v.winning() == v.census.all_unbounded());
        CHECK(v.witness.has_value() == !v.winning());
    }
}

TEST_CASE("find_cop_in_cone examples") {
    const auto t1 = preset_copset("theorem1", 2);
    const Point origin{0, 0};
    CHECK(find_cop_in_cone(t1, {0, 1}, origin, 3) == Point{4, 0});
    const std::vector<Point> ex{Point{4, 0}};
    CHECK(find_cop_in_cone(t1, {0, 1}, origin, 3, ex) == Point{8, 0});
    CHECK(brute_find(t1, {0, 1}, origin, 3, ex, 20) == Point{8, 0});

    const auto sub = preset_copset("sublattice", 2);
    const auto got = find_cop_in_cone(sub, {1, -1}, {3, 3}, 1);
    CHECK(got == brute_find(sub, {1, -1}, {3, 3}, 1, {}, 20));
    CHECK(got == Point{3, 2});

    CHECK_THROWS_AS(find_cop_in_cone(preset_copset("halfplane", 2), {1, -1}, origin, 1), BoundedDirection);
}

TEST_CASE("find_cop_in_cone agrees with window scans") {
    std::mt19937_64 rng(7);
    auto run = [&](const std::vector<CopSet>& specs, Coord apex_r, Coord window, int trials) {
        for (const auto& spec : specs) {
            const auto dirs = all_directions(spec.dim());
            for (int t = 0; t < trials; ++t) {
                Point apex(spec.dim());
                for (std::size_t j = 0; j < spec.dim(); ++j)
                    apex[j] = static_cast<Coord>(rng() % (2 * apex_r + 1)) - apex_r;
                const auto dir = dirs[rng() % dirs.size()];
                const Coord min_shell = static_cast<Coord>(rng() % 9) - 3;
                std::vector<Point> exclude;
                auto got = try_find_cop_in_cone(spec, dir, apex, min_shell);
                if (got && rng() % 2 == 0) {
                    exclude.push_back(*got);
                    got = try_find_cop_in_cone(spec, dir, apex, min_shell, exclude);
                }
                CAPTURE(apex.str());
                CAPTURE(dir.name());
                CAPTURE(min_shell);
                const auto want = brute_find(spec, dir, apex, min_shell, exclude, window);
                if (!got) {
                    CHECK_FALSE(want.has_value());
                    continue;
                }
                CHECK(spec.contains(*got));
                CHECK(shell_index(*got, dir, apex) >= min_shell);
                // Only compare answers the window can see in full.
                if (l1_distance(*got, apex) <= window) CHECK(got == want);
            }
        }
    };
    run(sample_specs_2d(), 6, 40, 60);
    run(sample_specs_3d(), 3, 14, 25);
}

TEST_CASE("analytic density") {
    CHECK(analytic_density(preset_copset("halfplane", 2)) == Rational::make(1, 2));
    CHECK(analytic_density(preset_copset("sublattice", 2)) == Rational::make(1, 2));
    CHECK(analytic_density(preset_copset("theorem1", 2)) == Rational::make(0, 1));
    CHECK(analytic_density(preset_copset("finite", 2)) == Rational::make(0, 1));
    CHECK(analytic_density(CopSet(2, {Sublattice{{3, 2}, {1, 1}}})) == Rational::make(1, 6));
    // Union: 1/2 + 1/2 - 1/4.
    CHECK(analytic_density(CopSet(2, {HalfSpace{1, 1, 0}, Sublattice{{1, 2}, {0, 1}}})) == Rational::make(3, 4));
    CHECK(analytic_density(CopSet(3, {HalfSpace{0, 1, 0}, HalfSpace{1, -1, 2}})) == Rational::make(3, 4));
}

TEST_CASE("estimate density examples") {
    const auto hp = estimate_density(preset_copset("halfplane", 2), 10);
    REQUIRE(hp.rows.size() == 10);
    CHECK(hp.rows.back().count == 231);
    CHECK(hp.rows.back().total == 441);
    CHECK(hp.rows.back().ratio() == Rational::make(231, 441));
    const auto sub = estimate_density(preset_copset("sublattice", 2), 10);
    CHECK(sub.rows.back().count == 11 * 21);
    const auto fin = estimate_density(preset_copset("finite", 2), 4);
    for (const auto& r : fin.rows) CHECK(r.count == 0);
}

TEST_CASE("estimate density equals brute-force counts") {
    for (const auto& spec : sample_specs_2d()) {
        const auto est = estimate_density(spec, 25);
        REQUIRE(est.rows.size() == 25);
        for (const auto& row : est.rows) {
            CAPTURE(row.m);
            CHECK(row.count == brute_count(spec, row.m));
            CHECK(row.total == static_cast<std::uint64_t>((2 * row.m + 1) * (2 * row.m + 1)));
        }
    }
    for (const auto& spec : sample_specs_3d()) {
        const auto est = estimate_density(spec, 10);
        for (const auto& row : est.rows) CHECK(row.count == brute_count(spec, row.m));
    }
}

TEST_CASE("boundary-layer bound") {
    for (const auto* name : {"halfplane", "sublattice"}) {
        const auto spec = preset_copset(name, 2);
        const auto d = analytic_density(spec)->value();
        const auto est = estimate_density(spec, 1000);
        REQUIRE(est.rows.size() == 1000);
        for (const auto& row : est.rows)
            REQUIRE(std::abs(row.ratio_value() - d) <= 2.0 / static_cast<double>(row.m + 1));
    }
}

TEST_CASE("enumeration fallback and truncation") {
    DensityOptions tiny;
    tiny.max_terms = 1;
    const auto spec = CopSet(2, {HalfSpace{1, 1, 0}, Sublattice{{1, 2}, {0, 1}}});
    const auto est = estimate_density(spec, 12, tiny);
    CHECK(est.enumerated);
    for (const auto& row : est.rows) CHECK(row.count == brute_count(spec, row.m));
    CHECK_FALSE(analytic_density(spec, tiny).has_value());

    tiny.cell_budget = 200;
    const auto cut = estimate_density(spec, 12, tiny);
    CHECK(cut.truncated);
    CHECK(cut.rows.size() < 12);
    CHECK_FALSE(cut.truncation_reason.empty());
}

TEST_CASE("max-form counterexample") {
    const auto ce = maxform_counterexample(3, 10);
    CHECK(ce.entries.size() == 60);
    CHECK(ce.all_maxform_members);
    CHECK(ce.interceptable_count == 0);
    const auto& first = ce.entries.front();
    CHECK(first.point == Point{3, 2, 2});
    CHECK(first.maxform_shell == 1);
    CHECK(first.sum_shell == -1);
    for (const auto& e : ce.entries) {
        CHECK(ce.copset.contains(e.point));
        CHECK(e.maxform_shell == e.level);
    }
    CHECK_THROWS(maxform_counterexample(2, 3));
}

TEST_CASE("interception inequality has no solution for (3a,2a,2a)") {
    // The +X1 runner from the origin is at (k,0,0) after k turns; a cop needs
    // |3a - k| + 4a <= k to reach it by then.
    for (Coord a = 1; a <= 20; ++a)
        for (Coord k = 1; k <= 10'000; ++k) REQUIRE(std::llabs(3 * a - k) + 4 * a > k);
}
