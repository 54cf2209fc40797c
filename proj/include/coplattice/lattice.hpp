#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coplattice {

using Coord = std::int64_t;

// A vertex of Z^n.
class Point {
public:
    Point() = default;
    explicit Point(std::size_t dim) : coords_(dim, 0) {}
    explicit Point(std::vector<Coord> coords) : coords_(std::move(coords)) {}
    Point(std::initializer_list<Coord> coords) : coords_(coords) {}

    static Point origin(std::size_t dim) { return Point(dim); }

    std::size_t dim() const noexcept { return coords_.size(); }
    Coord operator[](std::size_t i) const { return coords_[i]; }
    Coord& operator[](std::size_t i) { return coords_[i]; }

    std::span<const Coord> coords() const noexcept { return coords_; }
    const std::vector<Coord>& vec() const noexcept { return coords_; }
    auto begin() const noexcept { return coords_.begin(); }
    auto end() const noexcept { return coords_.end(); }

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;

    // "1,-2,0"
    std::string str() const;

private:
    std::vector<Coord> coords_;
};

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept;
};

// One of the 2n escape directions. `axis` is 0-based; names are 1-based ("X1+").
struct Direction {
    int axis = 0;
    int sign = 1;

    static Direction from_index(std::size_t index) {
        return {static_cast<int>(index / 2), index % 2 == 0 ? 1 : -1};
    }
    std::size_t index() const noexcept { return static_cast<std::size_t>(2 * axis + (sign > 0 ? 0 : 1)); }
    Direction opposite() const noexcept { return {axis, -sign}; }
    std::string name() const;

    friend bool operator==(const Direction&, const Direction&) = default;
};

// X1+, X1-, X2+, X2-, ...
std::vector<Direction> all_directions(std::size_t dim);
std::size_t direction_count(std::size_t dim) noexcept;

// Accepts "X<i>+" / "X<i>-" (case-insensitive X). Throws std::invalid_argument.
Direction parse_direction(std::string_view text, std::size_t dim);

// Stay, or a unit step along one axis.
class Move {
public:
    static Move stay() { return Move{}; }
    static Move step(Direction d) { return Move{d}; }
    static Move step(int axis, int sign) { return Move{Direction{axis, sign}}; }

    bool is_stay() const noexcept { return !step_.has_value(); }
    const std::optional<Direction>& direction() const noexcept { return step_; }

    Point apply(const Point& p) const;
    // "stay" or "X1+"
    std::string name() const;

    friend bool operator==(const Move&, const Move&) = default;

private:
    Move() = default;
    explicit Move(Direction d) : step_(d) {}

    std::optional<Direction> step_;
};

// Parses "stay" or a direction name.
Move parse_move(std::string_view text, std::size_t dim);

// Interprets an integer displacement as a move; throws IllegalMove unless it is
// all zeros or a single +-1 entry.
Move move_from_delta(std::span<const Coord> delta);

// Throws ContractViolation unless the points share a dimension.
void require_same_dim(const Point& p, const Point& q);

Coord l1_distance(const Point& p, const Point& q);
Coord l1_norm(const Point& p);
Coord chebyshev_norm(const Point& p);

// sigma * (p_m - apex_m) - sum_{j != m} |p_j - apex_j|. p lies on shell l of
// `dir` about `apex` iff this equals l, and in the closed cone of level l iff >= l.
Coord shell_index(const Point& p, Direction dir, const Point& apex);

// sigma * (p_m - apex_m) - max_{j != m} |p_j - apex_j|: the per-coordinate pyramid.
// Only used to exhibit the gap between the two cone forms for n >= 3.
Coord maxform_shell_index(const Point& p, Direction dir, const Point& apex);

// shell_index(p, dir, apex2) >= shell_index(p, dir, apex1) - l1_distance(apex1, apex2).
bool shell_shift_bound(const Point& p, Direction dir, const Point& apex1, const Point& apex2);

// Comma-separated integers, e.g. "1,-2". Throws std::invalid_argument.
Point parse_point(std::string_view text);

}  // namespace coplattice
