#include "coplattice/copset.hpp"

#include "coplattice/errors.hpp"
#include "coplattice/strategy.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <tuple>
#include <unordered_set>

namespace coplattice {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string gen_path(std::size_t i) { return "generators[" + std::to_string(i) + "]"; }

void check_axis(int axis, std::size_t dim, const std::string& path) {
    if (axis < 0 || static_cast<std::size_t>(axis) >= dim)
        throw SpecError(path + ".axis", "must be in 1.." + std::to_string(dim));
}

void check_signs(const SignSet& s, const std::string& path) {
    if (!s.plus && !s.minus) throw SpecError(path + ".signs", "must contain at least one of +, -");
}

void check_coord(Coord v, const std::string& path) {
    if (v > kCoordLimit || v < -kCoordLimit) throw SpecError(path, "magnitude exceeds 2^52");
}

// base^k <= kCoordLimit, or nullopt.
std::optional<Coord> checked_power(Coord base, int k) {
    Coord v = 1;
    for (int i = 0; i < k; ++i) {
        if (v > kCoordLimit / base) return std::nullopt;
        v *= base;
    }
    return v;
}

// Visits magnitudes of an axis family in increasing order until `fn` returns
// false or the magnitudes leave the representable range.
void for_each_magnitude(const AxisGeometric& g, const std::function<bool(Coord)>& fn) {
    auto v = checked_power(g.base, g.start_exponent);
    if (!v) return;
    for (Coord mag = *v;;) {
        if (!fn(mag)) return;
        if (mag > kCoordLimit / g.base) return;
        mag *= g.base;
    }
}

Point axis_point(std::size_t dim, int axis, Coord value) {
    Point p(dim);
    p[static_cast<std::size_t>(axis)] = value;
    return p;
}

bool on_axis(const Point& p, int axis) {
    for (std::size_t j = 0; j < p.dim(); ++j)
        if (static_cast<int>(j) != axis && p[j] != 0) return false;
    return true;
}

std::vector<ProductSet> to_products(std::size_t dim, const Generator& g) {
    return std::visit(
        overloaded{
            [&](const Sublattice& s) {
                std::vector<CoordRange> r(dim);
                for (std::size_t j = 0; j < dim; ++j) {
                    r[j].modulus = s.moduli[j];
                    r[j].residue = s.residues[j];
                }
                return std::vector<ProductSet>{ProductSet(std::move(r))};
            },
            [&](const HalfSpace& h) {
                auto p = ProductSet::everything(dim);
                auto a = static_cast<std::size_t>(h.axis);
                if (h.sign > 0) p[a].lo = h.threshold;
                else p[a].hi = -h.threshold;
                return std::vector<ProductSet>{p};
            },
            [&](const AxisArithmetic& g) {
                std::vector<ProductSet> out;
                for (int sign : {1, -1}) {
                    if (!g.signs.has(sign)) continue;
                    std::vector<CoordRange> r(dim);
                    for (std::size_t j = 0; j < dim; ++j) r[j].lo = r[j].hi = 0;
                    auto& c = r[static_cast<std::size_t>(g.axis)];
                    c.lo.reset();
                    c.hi.reset();
                    if (sign > 0) c.lo = g.offset;
                    else c.hi = -g.offset;
                    c.modulus = g.step;
                    c.residue = ((sign * g.offset) % g.step + g.step) % g.step;
                    out.emplace_back(std::move(r));
                }
                return out;
            },
            [&](const auto&) { return std::vector<ProductSet>{}; },
        },
        g);
}

}  // namespace

CopSet::CopSet(std::size_t dim, std::vector<Generator> generators) : dim_(dim), generators_(std::move(generators)) {
    if (dim_ < 1) throw SpecError("dimension", "must be >= 1");
    if (generators_.empty()) throw SpecError("generators", "must not be empty");
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        const auto path = gen_path(i);
        std::visit(overloaded{
                       [&](const ExplicitFinite& e) {
                           for (std::size_t k = 0; k < e.points.size(); ++k) {
                               const auto ppath = path + ".points[" + std::to_string(k) + "]";
                               if (e.points[k].dim() != dim_)
                                   throw SpecError(ppath, "expected " + std::to_string(dim_) + " coordinates");
                               for (Coord c : e.points[k]) check_coord(c, ppath);
                           }
                       },
                       [&](const AxisGeometric& g) {
                           check_axis(g.axis, dim_, path);
                           if (g.base < 2) throw SpecError(path + ".base", "must be >= 2");
                           if (g.start_exponent < 0) throw SpecError(path + ".startExponent", "must be >= 0");
                           if (!checked_power(g.base, g.start_exponent))
                               throw SpecError(path + ".startExponent", "base^startExponent exceeds 2^52");
                           check_signs(g.signs, path);
                       },
                       [&](const AxisArithmetic& g) {
                           check_axis(g.axis, dim_, path);
                           if (g.step < 1) throw SpecError(path + ".step", "must be >= 1");
                           if (g.step > (Coord{1} << 40)) throw SpecError(path + ".step", "must be <= 2^40");
                           if (g.offset < 0) throw SpecError(path + ".offset", "must be >= 0");
                           check_coord(g.offset, path + ".offset");
                           check_signs(g.signs, path);
                       },
                       [&](const Sublattice& s) {
                           if (s.moduli.size() != dim_)
                               throw SpecError(path + ".moduli", "expected " + std::to_string(dim_) + " entries");
                           if (s.residues.size() != dim_)
                               throw SpecError(path + ".residues", "expected " + std::to_string(dim_) + " entries");
                           for (std::size_t j = 0; j < dim_; ++j) {
                               if (s.moduli[j] < 1 || s.moduli[j] > (Coord{1} << 40))
                                   throw SpecError(path + ".moduli[" + std::to_string(j) + "]", "must be in 1..2^40");
                               if (s.residues[j] < 0 || s.residues[j] >= s.moduli[j])
                                   throw SpecError(path + ".residues[" + std::to_string(j) + "]",
                                                   "must satisfy 0 <= residue < modulus");
                           }
                       },
                       [&](const HalfSpace& h) {
                           check_axis(h.axis, dim_, path);
                           if (h.sign != 1 && h.sign != -1) throw SpecError(path + ".sign", "must be + or -");
                           check_coord(h.threshold, path + ".threshold");
                       },
                   },
                   generators_[i]);
        for (auto& p : to_products(dim_, generators_[i])) products_.push_back(std::move(p));
    }
}

bool CopSet::contains(const Point& p) const {
    if (p.dim() != dim_)
        throw ContractViolation("dimension mismatch: " + std::to_string(p.dim()) + " vs " + std::to_string(dim_));
    for (const auto& g : generators_) {
        bool hit = std::visit(overloaded{
                                  [&](const ExplicitFinite& e) {
                                      return std::find(e.points.begin(), e.points.end(), p) != e.points.end();
                                  },
                                  [&](const AxisGeometric& g) {
                                      if (!on_axis(p, g.axis)) return false;
                                      Coord v = p[static_cast<std::size_t>(g.axis)];
                                      if (v == 0 || !g.signs.has(v > 0 ? 1 : -1)) return false;
                                      Coord mag = std::llabs(v);
                                      int k = 0;
                                      while (mag % g.base == 0) {
                                          mag /= g.base;
                                          ++k;
                                      }
                                      return mag == 1 && k >= g.start_exponent;
                                  },
                                  [&](const AxisArithmetic& g) {
                                      if (!on_axis(p, g.axis)) return false;
                                      Coord v = p[static_cast<std::size_t>(g.axis)];
                                      for (int sign : {1, -1}) {
                                          if (!g.signs.has(sign)) continue;
                                          Coord u = sign * v - g.offset;
                                          if (u >= 0 && u % g.step == 0) return true;
                                      }
                                      return false;
                                  },
                                  [&](const Sublattice& s) {
                                      for (std::size_t j = 0; j < dim_; ++j) {
                                          Coord r = p[j] % s.moduli[j];
                                          if (r < 0) r += s.moduli[j];
                                          if (r != s.residues[j]) return false;
                                      }
                                      return true;
                                  },
                                  [&](const HalfSpace& h) {
                                      return h.sign * p[static_cast<std::size_t>(h.axis)] >= h.threshold;
                                  },
                              },
                              g);
        if (hit) return true;
    }
    return false;
}

bool DirectionCensus::all_unbounded() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const CensusEntry& e) { return e.unbounded; });
}

namespace {

CensusEntry merge(const CensusEntry& a, const CensusEntry& b) {
    if (a.unbounded || b.unbounded) return CensusEntry::make_unbounded();
    if (!a.max_shell) return b;
    if (!b.max_shell) return a;
    return CensusEntry::bounded(std::max(*a.max_shell, *b.max_shell));
}

CensusEntry primitive_census(const Generator& g, Direction d, std::size_t dim) {
    const Point origin = Point::origin(dim);
    return std::visit(
        overloaded{
            [&](const ExplicitFinite& e) {
                std::optional<Coord> best;
                for (const auto& p : e.points) {
                    Coord s = shell_index(p, d, origin);
                    best = best ? std::max(*best, s) : s;
                }
                return CensusEntry::bounded(best);
            },
            [&](const AxisGeometric& g) {
                if (g.axis == d.axis && g.signs.has(d.sign)) return CensusEntry::make_unbounded();
                return CensusEntry::bounded(-*checked_power(g.base, g.start_exponent));
            },
            [&](const AxisArithmetic& g) {
                if (g.axis == d.axis && g.signs.has(d.sign)) return CensusEntry::make_unbounded();
                return CensusEntry::bounded(-g.offset);
            },
            [&](const Sublattice&) { return CensusEntry::make_unbounded(); },
            [&](const HalfSpace& h) {
                if (h.axis == d.axis && h.sign == -d.sign) return CensusEntry::bounded(-h.threshold);
                return CensusEntry::make_unbounded();
            },
        },
        g);
}

}  // namespace

DirectionCensus census(const CopSet& spec) {
    DirectionCensus out(spec.dim());
    for (auto d : all_directions(spec.dim())) {
        auto entry = CensusEntry::bounded(std::nullopt);
        for (const auto& g : spec.generators()) entry = merge(entry, primitive_census(g, d, spec.dim()));
        out[d] = entry;
    }
    return out;
}

Verdict classify(const CopSet& spec) {
    Verdict v{Outcome::Winning, census(spec), std::nullopt};
    for (auto d : all_directions(spec.dim())) {
        const auto& e = v.census[d];
        if (e.unbounded) continue;
        v.outcome = Outcome::Losing;
        Coord bound = std::max<Coord>(0, e.max_shell.value_or(0));
        v.witness = EscapeWitness{d, bound, axis_point(spec.dim(), d.axis, d.sign * (bound + 2))};
        break;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Cone search

namespace {

using CandidateKey = std::tuple<Coord, Coord, Point>;

struct SearchBudget {
    std::uint64_t remaining = 200'000'000;

    void tick() {
        if (remaining-- == 0) throw std::runtime_error("cone search budget exhausted");
    }
};

bool is_excluded(const Point& p, std::span<const Point> exclude) {
    return std::find(exclude.begin(), exclude.end(), p) != exclude.end();
}

// Ranges for the displacement y = p - apex.
CoordRange shifted(const CoordRange& r, Coord by) {
    CoordRange out = r;
    if (out.lo) *out.lo -= by;
    if (out.hi) *out.hi -= by;
    out.residue = ((r.residue - by) % r.modulus + r.modulus) % r.modulus;
    return out;
}

CoordRange reflected(const CoordRange& r) {
    CoordRange out;
    if (r.hi) out.lo = -*r.hi;
    if (r.lo) out.hi = -*r.lo;
    out.modulus = r.modulus;
    out.residue = ((-r.residue) % r.modulus + r.modulus) % r.modulus;
    return out;
}

Coord safe_lcm(Coord a, Coord b) {
    __int128 l = __int128(a / std::gcd(a, b)) * b;
    return l > (Coord{1} << 40) ? (Coord{1} << 40) : static_cast<Coord>(l);
}

// Best member of a product set in the cone, under the (shell, l1, lex) order.
// Shells above `shell_limit` are not searched.
class ProductConeSearch {
public:
    ProductConeSearch(const ProductSet& set, Direction dir, const Point& apex, std::span<const Point> exclude,
                      SearchBudget& budget)
        : set_(set), dir_(dir), apex_(apex), exclude_(exclude), budget_(budget), axis_(static_cast<std::size_t>(dir.axis)) {
        const std::size_t n = set.dim();
        for (std::size_t j = 0; j < n; ++j) {
            auto r = shifted(set[j], apex[j]);
            if (j == axis_) along_ = dir.sign > 0 ? r : reflected(r);
            else {
                free_.push_back(j);
                ranges_.push_back(r);
            }
        }
        suffix_min_.assign(free_.size() + 1, 0);
        suffix_max_.assign(free_.size() + 1, 0);
        for (std::size_t k = free_.size(); k-- > 0;) {
            suffix_min_[k] = suffix_min_[k + 1] + ranges_[k].min_abs().value_or(0);
            auto mx = ranges_[k].max_abs();
            suffix_max_[k] = (mx && suffix_max_[k + 1]) ? std::optional(*suffix_max_[k + 1] + *mx) : std::nullopt;
        }
    }

    std::optional<Point> run(Coord min_shell, std::optional<Coord> shell_limit) {
        if (set_.empty()) return std::nullopt;
        const auto E = static_cast<Coord>(exclude_.size());
        // along_ holds sigma * y_m. Shell s = sigma*y_m - T with T = sum |y_free|.
        Coord s_hi;
        if (along_.hi) {
            auto top = along_.last_at_or_below(*along_.hi);
            if (!top) return std::nullopt;
            s_hi = *top - suffix_min_[0];
        } else {
            auto p0 = set_.any_member();
            Coord start = std::max(min_shell, shell_index(*p0, dir_, apex_));
            s_hi = start + (E + 1) * along_.modulus;
        }
        if (shell_limit) s_hi = std::min(s_hi, *shell_limit);

        period_ = along_.modulus;
        Coord modsum = 0;
        for (const auto& r : ranges_) {
            if (!r.max_abs()) period_ = safe_lcm(period_, r.modulus);
            modsum += r.modulus;
        }
        t_slack_ = (E + 2) * period_ + 2 * modsum + 2;

        for (Coord s = min_shell; s <= s_hi; ++s) {
            budget_.tick();
            if (auto p = search_shell(s)) return p;
        }
        return std::nullopt;
    }

private:
    std::optional<Point> search_shell(Coord s) {
        // sigma*y_m = s + T must lie in along_.
        Coord t_lo = std::max<Coord>(0, suffix_min_[0]);
        if (along_.lo) t_lo = std::max(t_lo, *along_.lo - s);
        std::optional<Coord> t_hi = suffix_max_[0];
        if (free_.empty()) t_hi = 0;
        if (along_.hi) t_hi = t_hi ? std::min(*t_hi, *along_.hi - s) : *along_.hi - s;
        if (!t_hi) t_hi = t_lo + t_slack_;
        if (t_lo > *t_hi) return std::nullopt;

        // First T with s + T in the residue class of along_.
        Coord rem = ((along_.residue - s - t_lo) % along_.modulus + along_.modulus) % along_.modulus;
        Coord t = t_lo + rem;

        std::optional<Point> group_best;
        for (; t <= *t_hi; t += along_.modulus) {
            budget_.tick();
            const bool shared_l1 = s + t <= 0;  // every T with s + T <= 0 has l1 = -s
            if (group_best && !shared_l1) return group_best;
            if (auto p = search_level(s, t)) {
                if (!group_best || *p < *group_best) group_best = p;
                if (!shared_l1) return group_best;
            }
        }
        return group_best;
    }

    std::optional<Point> search_level(Coord s, Coord t) {
        Point p = apex_;
        p[axis_] = apex_[axis_] + dir_.sign * (s + t);
        std::optional<Point> found;
        descend(0, t, p, found);
        return found;
    }

    bool descend(std::size_t k, Coord remaining, Point& p, std::optional<Point>& found) {
        budget_.tick();
        if (k == free_.size()) {
            if (remaining != 0 || is_excluded(p, exclude_)) return false;
            found = p;
            return true;
        }
        const auto& r = ranges_[k];
        const std::size_t j = free_[k];
        auto try_value = [&](Coord v) {
            Coord rest = remaining - std::llabs(v);
            if (rest < suffix_min_[k + 1]) return false;
            if (suffix_max_[k + 1] && rest > *suffix_max_[k + 1]) return false;
            p[j] = apex_[j] + v;
            return descend(k + 1, rest, p, found);
        };
        if (k + 1 == free_.size()) {
            if (remaining == 0) return r.contains(0) && try_value(0);
            return (r.contains(-remaining) && try_value(-remaining)) || (r.contains(remaining) && try_value(remaining));
        }
        for (auto v = r.first_at_or_above(-remaining); v && *v <= remaining; v = *v + r.modulus) {
            if (r.hi && *v > *r.hi) break;
            if (try_value(*v)) return true;
            budget_.tick();
        }
        return false;
    }

    const ProductSet& set_;
    Direction dir_;
    const Point& apex_;
    std::span<const Point> exclude_;
    SearchBudget& budget_;
    std::size_t axis_;
    CoordRange along_;
    std::vector<std::size_t> free_;
    std::vector<CoordRange> ranges_;
    std::vector<Coord> suffix_min_;
    std::vector<std::optional<Coord>> suffix_max_;
    Coord period_ = 1;
    Coord t_slack_ = 0;
};

}  // namespace

std::optional<Point> try_find_cop_in_cone(const CopSet& spec, Direction dir, const Point& apex, Coord min_shell,
                                          std::span<const Point> exclude) {
    require_same_dim(Point(spec.dim()), apex);
    if (dir.axis < 0 || static_cast<std::size_t>(dir.axis) >= spec.dim())
        throw ContractViolation("direction " + dir.name() + " invalid for dimension " + std::to_string(spec.dim()));

    std::optional<CandidateKey> best;
    auto offer = [&](const Point& p) {
        Coord s = shell_index(p, dir, apex);
        if (s < min_shell || is_excluded(p, exclude)) return;
        CandidateKey key{s, l1_distance(p, apex), p};
        if (!best || key < *best) best = std::move(key);
    };

    for (const auto& g : spec.generators()) {
        if (const auto* e = std::get_if<ExplicitFinite>(&g)) {
            for (const auto& p : e->points) offer(p);
        } else if (const auto* ag = std::get_if<AxisGeometric>(&g)) {
            const auto a = static_cast<std::size_t>(ag->axis);
            for (int sign : {1, -1}) {
                if (!ag->signs.has(sign)) continue;
                const bool growing = ag->axis == dir.axis && sign == dir.sign;
                // Upper bound on the shell of v*e_a is ceiling - |v|.
                Coord ceiling = 0;
                if (!growing) {
                    const auto m = static_cast<std::size_t>(dir.axis);
                    ceiling = -dir.sign * apex[m];
                    for (std::size_t j = 0; j < apex.dim(); ++j)
                        if (j != m && j != a) ceiling -= std::llabs(apex[j]);
                    if (a != m) ceiling += std::llabs(apex[a]);
                }
                for_each_magnitude(*ag, [&](Coord mag) {
                    Point p = axis_point(spec.dim(), ag->axis, sign * mag);
                    if (growing) {
                        Coord s = shell_index(p, dir, apex);
                        if (s < min_shell || is_excluded(p, exclude)) return true;
                        offer(p);
                        return false;
                    }
                    if (ceiling - mag < min_shell) return false;
                    offer(p);
                    return true;
                });
            }
        }
    }

    SearchBudget budget;
    for (const auto& product : spec.products()) {
        std::optional<Coord> limit;
        if (best) limit = std::get<0>(*best);
        ProductConeSearch search(product, dir, apex, exclude, budget);
        if (auto p = search.run(min_shell, limit)) offer(*p);
    }
    if (!best) return std::nullopt;
    return std::get<2>(*best);
}

Point find_cop_in_cone(const CopSet& spec, Direction dir, const Point& apex, Coord min_shell,
                       std::span<const Point> exclude) {
    if (auto p = try_find_cop_in_cone(spec, dir, apex, min_shell, exclude)) return *p;
    throw BoundedDirection(dir.name(), "no cop with shell >= " + std::to_string(min_shell) + " in direction " +
                                           dir.name() + " about (" + apex.str() + ")");
}

// ---------------------------------------------------------------------------
// Density

namespace {

struct Term {
    int sign;
    ProductSet set;
};

// Inclusion-exclusion expansion of the union of products; nullopt when over
// budget or a combined modulus overflows.
std::optional<std::vector<Term>> expand_union(const std::vector<ProductSet>& products, std::size_t max_terms) {
    std::vector<Term> terms;
    bool over = false;
    std::function<void(std::size_t, const ProductSet&, int)> extend = [&](std::size_t next, const ProductSet& cur,
                                                                         int sign) {
        for (std::size_t i = next; i < products.size() && !over; ++i) {
            auto both = intersect(cur, products[i]);
            if (!both) continue;
            if (terms.size() >= max_terms) {
                over = true;
                return;
            }
            terms.push_back({-sign, *both});
            extend(i + 1, *both, -sign);
        }
    };
    try {
        for (std::size_t i = 0; i < products.size() && !over; ++i) {
            if (products[i].empty()) continue;
            if (terms.size() >= max_terms) {
                over = true;
                break;
            }
            terms.push_back({1, products[i]});
            extend(i + 1, products[i], 1);
        }
    } catch (const std::overflow_error&) {
        return std::nullopt;
    }
    if (over) return std::nullopt;
    return terms;
}

// Distinct sparse cops (explicit points, geometric rays) within [-m_max, m_max]^n
// that no product set already covers.
std::vector<Point> sparse_points(const CopSet& spec, Coord m_max) {
    std::unordered_set<Point, PointHash> seen;
    std::vector<Point> out;
    auto add = [&](const Point& p) {
        if (chebyshev_norm(p) > m_max) return;
        for (const auto& prod : spec.products())
            if (prod.contains(p)) return;
        if (seen.insert(p).second) out.push_back(p);
    };
    for (const auto& g : spec.generators()) {
        if (const auto* e = std::get_if<ExplicitFinite>(&g)) {
            for (const auto& p : e->points) add(p);
        } else if (const auto* ag = std::get_if<AxisGeometric>(&g)) {
            for_each_magnitude(*ag, [&](Coord mag) {
                if (mag > m_max) return false;
                for (int sign : {1, -1})
                    if (ag->signs.has(sign)) add(axis_point(spec.dim(), ag->axis, sign * mag));
                return true;
            });
        }
    }
    return out;
}

std::optional<std::uint64_t> box_total(std::size_t dim, Coord m) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < dim; ++i)
        if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(2 * m + 1), &total)) return std::nullopt;
    return total;
}

// Calls fn on every point with Chebyshev norm exactly m.
void for_each_on_sphere(std::size_t dim, Coord m, const std::function<void(const Point&)>& fn) {
    if (m == 0) {
        fn(Point::origin(dim));
        return;
    }
    Point p(dim);
    // k = first coordinate at +-m; earlier coordinates strictly inside.
    for (std::size_t k = 0; k < dim; ++k) {
        std::function<void(std::size_t)> fill = [&](std::size_t j) {
            if (j == dim) {
                fn(p);
                return;
            }
            if (j == k) {
                for (Coord v : {-m, m}) {
                    p[j] = v;
                    fill(j + 1);
                }
                return;
            }
            Coord bound = j < k ? m - 1 : m;
            for (Coord v = -bound; v <= bound; ++v) {
                p[j] = v;
                fill(j + 1);
            }
        };
        fill(0);
    }
}

}  // namespace

Rational DensityRow::ratio() const {
    return Rational::make(static_cast<std::int64_t>(count), static_cast<std::int64_t>(total));
}

std::optional<Rational> analytic_density(const CopSet& spec, const DensityOptions& options) {
    auto terms = expand_union(spec.products(), options.max_terms);
    if (!terms) return std::nullopt;
    // Explicit points and geometric rays have density zero.
    Rational pos{0, 1}, neg{0, 1};
    for (const auto& t : *terms) {
        auto d = t.set.density();
        if (!d) return std::nullopt;
        auto& side = t.sign > 0 ? pos : neg;
        auto next = add(side, *d);
        if (!next) return std::nullopt;
        side = *next;
    }
    return sub(pos, neg);
}

DensityEstimate estimate_density(const CopSet& spec, Coord m_max, const DensityOptions& options) {
    if (m_max < 1) throw ContractViolation("m_max must be >= 1");
    DensityEstimate out;
    const std::size_t n = spec.dim();
    auto terms = expand_union(spec.products(), options.max_terms);

    if (terms) {
        auto sparse = sparse_points(spec, m_max);
        std::vector<Coord> radii;
        radii.reserve(sparse.size());
        for (const auto& p : sparse) radii.push_back(chebyshev_norm(p));
        std::sort(radii.begin(), radii.end());
        for (Coord m = 1; m <= m_max; ++m) {
            auto total = box_total(n, m);
            __int128 count = static_cast<__int128>(std::upper_bound(radii.begin(), radii.end(), m) - radii.begin());
            bool overflow = !total;
            for (const auto& t : *terms) {
                auto c = t.set.count_in_box(m);
                if (!c) {
                    overflow = true;
                    break;
                }
                count += t.sign * static_cast<__int128>(*c);
            }
            if (overflow) {
                out.truncated = true;
                out.truncation_reason = "box count overflows 64 bits at m=" + std::to_string(m);
                break;
            }
            out.rows.push_back({m, static_cast<std::uint64_t>(count), *total});
        }
        return out;
    }

    out.enumerated = true;
    std::uint64_t visited = 0;
    std::uint64_t count = spec.contains(Point::origin(n)) ? 1 : 0;
    visited = 1;
    for (Coord m = 1; m <= m_max; ++m) {
        auto total = box_total(n, m);
        auto inner = box_total(n, m - 1);
        if (!total || !inner || visited + (*total - *inner) > options.cell_budget) {
            out.truncated = true;
            out.truncation_reason = "cell budget of " + std::to_string(options.cell_budget) + " exceeded at m=" +
                                    std::to_string(m);
            break;
        }
        for_each_on_sphere(n, m, [&](const Point& p) {
            ++visited;
            if (spec.contains(p)) ++count;
        });
        out.rows.push_back({m, count, *total});
    }
    return out;
}

// ---------------------------------------------------------------------------

MaxformCounterexample maxform_counterexample(std::size_t dim, Coord depth) {
    if (dim < 3) throw ContractViolation("max-form and sum-form cones coincide for n <= 2; need n >= 3");
    if (depth < 1) throw ContractViolation("depth must be >= 1");
    std::vector<CounterexampleEntry> entries;
    std::vector<Point> points;
    const Point origin = Point::origin(dim);
    const Direction runner{0, 1};
    for (Coord a = 1; a <= depth; ++a) {
        for (auto d : all_directions(dim)) {
            Point p(dim);
            for (std::size_t j = 0; j < dim; ++j) p[j] = 2 * a;
            p[static_cast<std::size_t>(d.axis)] = d.sign * 3 * a;
            CounterexampleEntry e{p, d, a, maxform_shell_index(p, d, origin), shell_index(p, d, origin)};
            e.maxform_member = e.maxform_shell == a;
            e.interceptable = interception_predicate(p, origin, runner);
            entries.push_back(e);
            points.push_back(p);
        }
    }
    MaxformCounterexample out{CopSet(dim, {ExplicitFinite{std::move(points)}}), std::move(entries)};
    out.all_maxform_members =
        std::all_of(out.entries.begin(), out.entries.end(), [](const auto& e) { return e.maxform_member; });
    out.interceptable_count = static_cast<std::size_t>(
        std::count_if(out.entries.begin(), out.entries.end(), [](const auto& e) { return e.interceptable; }));
    return out;
}

std::vector<std::string> preset_names() { return {"theorem1", "halfplane", "sublattice", "finite", "empty"}; }

CopSet preset_copset(const std::string& name, std::size_t dim) {
    if (name == "theorem1") {
        std::vector<Generator> gens;
        for (std::size_t i = 0; i < dim; ++i) gens.push_back(AxisGeometric{static_cast<int>(i), 2, {}, 1});
        return CopSet(dim, std::move(gens));
    }
    if (name == "halfplane") {
        if (dim < 2) throw SpecError("preset", "halfplane needs dimension >= 2");
        return CopSet(dim, {HalfSpace{1, 1, 0}});
    }
    if (name == "sublattice") {
        if (dim < 2) throw SpecError("preset", "sublattice needs dimension >= 2");
        Sublattice s{std::vector<Coord>(dim, 1), std::vector<Coord>(dim, 0)};
        s.moduli[1] = 2;
        return CopSet(dim, {s});
    }
    if (name == "finite") return CopSet(dim, {ExplicitFinite{{Point(std::vector<Coord>(dim, 5))}}});
    if (name == "empty") return CopSet(dim, {ExplicitFinite{}});
    throw SpecError("preset", "unknown preset '" + name + "'");
}

}  // namespace coplattice
