#include "coplattice/product_set.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace coplattice {

namespace {

using i128 = __int128;

constexpr Coord kMaxModulus = Coord{1} << 40;

Coord floor_div(Coord a, Coord b) {
    Coord q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Coord pos_mod(Coord a, Coord m) {
    Coord r = a % m;
    return r < 0 ? r + m : r;
}

std::optional<Rational> reduce(i128 num, i128 den) {
    if (den == 0) return std::nullopt;
    if (den < 0) { num = -num; den = -den; }
    i128 a = num < 0 ? -num : num, b = den;
    while (b != 0) { i128 t = a % b; a = b; b = t; }
    if (a > 1) { num /= a; den /= a; }
    if (num == 0) den = 1;
    constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
    if (num > lim || num < -lim || den > lim) return std::nullopt;
    return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// x with a*x ≡ 1 (mod m), gcd(a, m) = 1, m >= 1.
Coord mod_inverse(Coord a, Coord m) {
    Coord g = m, x = 0, x1 = 1, a1 = pos_mod(a, m);
    while (a1 != 0) {
        Coord q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return pos_mod(x, m);
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
    auto r = reduce(num, den);
    if (!r) throw std::domain_error("invalid rational");
    return *r;
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::optional<Rational> add(const Rational& a, const Rational& b) {
    return reduce(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
}

std::optional<Rational> sub(const Rational& a, const Rational& b) {
    return reduce(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
}

std::optional<Rational> mul(const Rational& a, const Rational& b) {
    return reduce(i128(a.num) * b.num, i128(a.den) * b.den);
}

bool CoordRange::contains(Coord x) const noexcept {
    if (lo && x < *lo) return false;
    if (hi && x > *hi) return false;
    return pos_mod(x - residue, modulus) == 0;
}

std::optional<Coord> CoordRange::first_at_or_above(Coord x) const noexcept {
    Coord y = lo ? std::max(x, *lo) : x;
    Coord v = y + pos_mod(residue - y, modulus);
    if (hi && v > *hi) return std::nullopt;
    return v;
}

std::optional<Coord> CoordRange::last_at_or_below(Coord x) const noexcept {
    Coord y = hi ? std::min(x, *hi) : x;
    Coord v = y - pos_mod(y - residue, modulus);
    if (lo && v < *lo) return std::nullopt;
    return v;
}

bool CoordRange::empty() const noexcept {
    if (lo) return !first_at_or_above(*lo).has_value();
    return false;
}

std::uint64_t CoordRange::count_in(Coord a, Coord b) const noexcept {
    Coord l = lo ? std::max(a, *lo) : a;
    Coord h = hi ? std::min(b, *hi) : b;
    if (l > h) return 0;
    return static_cast<std::uint64_t>(floor_div(h - residue, modulus) - floor_div(l - 1 - residue, modulus));
}

std::optional<Coord> CoordRange::nearest_zero() const noexcept {
    auto up = first_at_or_above(0);
    auto down = last_at_or_below(0);
    if (!up) return down;
    if (!down) return up;
    return (-*down <= *up) ? down : up;
}

std::optional<Coord> CoordRange::min_abs() const noexcept {
    auto v = nearest_zero();
    if (!v) return std::nullopt;
    return std::llabs(*v);
}

std::optional<Coord> CoordRange::max_abs() const noexcept {
    if (!lo || !hi || empty()) return std::nullopt;
    auto a = first_at_or_above(*lo);
    auto b = last_at_or_below(*hi);
    return std::max(std::llabs(*a), std::llabs(*b));
}

std::optional<CoordRange> intersect(const CoordRange& a, const CoordRange& b) {
    CoordRange out;
    out.lo = a.lo && b.lo ? std::optional(std::max(*a.lo, *b.lo)) : (a.lo ? a.lo : b.lo);
    out.hi = a.hi && b.hi ? std::optional(std::min(*a.hi, *b.hi)) : (a.hi ? a.hi : b.hi);
    Coord g = std::gcd(a.modulus, b.modulus);
    Coord diff = b.residue - a.residue;
    if (diff % g != 0) return std::nullopt;
    i128 lcm = i128(a.modulus / g) * b.modulus;
    if (lcm > kMaxModulus) throw std::overflow_error("combined modulus too large");
    Coord m2 = b.modulus / g;
    Coord t = m2 == 1 ? 0 : static_cast<Coord>(i128(pos_mod(diff / g, m2)) * mod_inverse(a.modulus / g, m2) % m2);
    out.modulus = static_cast<Coord>(lcm);
    out.residue = pos_mod(static_cast<Coord>(a.residue + i128(a.modulus) * t % lcm), out.modulus);
    if (out.empty()) return std::nullopt;
    return out;
}

bool ProductSet::contains(const Point& p) const noexcept {
    if (p.dim() != ranges_.size()) return false;
    for (std::size_t j = 0; j < ranges_.size(); ++j)
        if (!ranges_[j].contains(p[j])) return false;
    return true;
}

bool ProductSet::empty() const noexcept {
    return std::any_of(ranges_.begin(), ranges_.end(), [](const CoordRange& r) { return r.empty(); });
}

std::optional<std::uint64_t> ProductSet::count_in_box(Coord m) const noexcept {
    std::uint64_t total = 1;
    for (const auto& r : ranges_) {
        std::uint64_t c = r.count_in(-m, m);
        if (c == 0) return 0;
        if (__builtin_mul_overflow(total, c, &total)) return std::nullopt;
    }
    return total;
}

std::optional<Rational> ProductSet::density() const {
    if (empty()) return Rational{0, 1};
    Rational d{1, 1};
    for (const auto& r : ranges_) {
        if (r.lo && r.hi) return Rational{0, 1};
        std::int64_t den = r.modulus * ((r.lo || r.hi) ? 2 : 1);
        auto next = mul(d, Rational{1, den});
        if (!next) return std::nullopt;
        d = *next;
    }
    return d;
}

std::optional<Point> ProductSet::any_member() const {
    Point p(ranges_.size());
    for (std::size_t j = 0; j < ranges_.size(); ++j) {
        auto v = ranges_[j].nearest_zero();
        if (!v) return std::nullopt;
        p[j] = *v;
    }
    return p;
}

std::optional<ProductSet> intersect(const ProductSet& a, const ProductSet& b) {
    if (a.dim() != b.dim()) return std::nullopt;
    std::vector<CoordRange> out;
    out.reserve(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) {
        auto r = intersect(a[j], b[j]);
        if (!r) return std::nullopt;
        out.push_back(*r);
    }
    return ProductSet(std::move(out));
}

}  // namespace coplattice
