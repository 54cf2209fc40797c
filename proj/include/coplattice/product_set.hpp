#pragma once

#include "coplattice/lattice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coplattice {

// Nonnegative exact fraction, always reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

// Checked arithmetic; nullopt on overflow.
std::optional<Rational> add(const Rational& a, const Rational& b);
std::optional<Rational> sub(const Rational& a, const Rational& b);
std::optional<Rational> mul(const Rational& a, const Rational& b);

// Integers in [lo, hi] congruent to residue mod modulus (bounds optional).
struct CoordRange {
    std::optional<Coord> lo;
    std::optional<Coord> hi;
    Coord modulus = 1;
    Coord residue = 0;  // in [0, modulus)

    bool contains(Coord x) const noexcept;
    bool empty() const noexcept;
    // Members inside [a, b].
    std::uint64_t count_in(Coord a, Coord b) const noexcept;
    // Smallest |x| over members; nullopt when empty.
    std::optional<Coord> min_abs() const noexcept;
    // Largest |x| over members; nullopt when unbounded (or empty).
    std::optional<Coord> max_abs() const noexcept;
    // Member nearest zero (ties to the smaller value).
    std::optional<Coord> nearest_zero() const noexcept;
    // Smallest member >= x, largest member <= x.
    std::optional<Coord> first_at_or_above(Coord x) const noexcept;
    std::optional<Coord> last_at_or_below(Coord x) const noexcept;

    friend bool operator==(const CoordRange&, const CoordRange&) = default;
};

// nullopt when the congruences are incompatible or the interval is empty.
// Throws std::overflow_error when the combined modulus exceeds 2^40.
std::optional<CoordRange> intersect(const CoordRange& a, const CoordRange& b);

// Cartesian product of per-coordinate ranges; the normal form for sublattices,
// half-spaces, slabs and axis progressions.
class ProductSet {
public:
    ProductSet() = default;
    explicit ProductSet(std::vector<CoordRange> ranges) : ranges_(std::move(ranges)) {}
    static ProductSet everything(std::size_t dim) { return ProductSet(std::vector<CoordRange>(dim)); }

    std::size_t dim() const noexcept { return ranges_.size(); }
    const CoordRange& operator[](std::size_t j) const { return ranges_[j]; }
    CoordRange& operator[](std::size_t j) { return ranges_[j]; }
    const std::vector<CoordRange>& ranges() const noexcept { return ranges_; }

    bool contains(const Point& p) const noexcept;
    bool empty() const noexcept;
    // |P ∩ [-m,m]^n|, nullopt on overflow.
    std::optional<std::uint64_t> count_in_box(Coord m) const noexcept;
    // Natural density; nullopt on overflow.
    std::optional<Rational> density() const;
    // Some member, or nullopt when empty.
    std::optional<Point> any_member() const;

private:
    std::vector<CoordRange> ranges_;
};

std::optional<ProductSet> intersect(const ProductSet& a, const ProductSet& b);

}  // namespace coplattice
