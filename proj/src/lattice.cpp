#include "coplattice/lattice.hpp"

#include "coplattice/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace coplattice {

std::string Point::str() const {
    std::string out;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(coords_[i]);
    }
    return out;
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.dim();
    for (Coord c : p) {
        h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

std::string Direction::name() const {
    return "X" + std::to_string(axis + 1) + (sign > 0 ? "+" : "-");
}

std::size_t direction_count(std::size_t dim) noexcept { return 2 * dim; }

std::vector<Direction> all_directions(std::size_t dim) {
    std::vector<Direction> out;
    out.reserve(2 * dim);
    for (std::size_t i = 0; i < 2 * dim; ++i) out.push_back(Direction::from_index(i));
    return out;
}

Direction parse_direction(std::string_view text, std::size_t dim) {
    if (text.size() < 3 || (text.front() != 'X' && text.front() != 'x'))
        throw std::invalid_argument("bad direction '" + std::string(text) + "' (expected X<i>+ or X<i>-)");
    char sign = text.back();
    if (sign != '+' && sign != '-')
        throw std::invalid_argument("bad direction '" + std::string(text) + "' (missing sign)");
    auto digits = text.substr(1, text.size() - 2);
    int axis = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), axis);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || axis < 1 ||
        static_cast<std::size_t>(axis) > dim)
        throw std::invalid_argument("bad direction '" + std::string(text) + "' for dimension " +
                                    std::to_string(dim));
    return {axis - 1, sign == '+' ? 1 : -1};
}

Point Move::apply(const Point& p) const {
    if (!step_) return p;
    if (step_->axis < 0 || static_cast<std::size_t>(step_->axis) >= p.dim())
        throw ContractViolation("move " + name() + " outside dimension " + std::to_string(p.dim()));
    Point q = p;
    q[static_cast<std::size_t>(step_->axis)] += step_->sign;
    return q;
}

std::string Move::name() const { return step_ ? step_->name() : "stay"; }

Move parse_move(std::string_view text, std::size_t dim) {
    if (text == "stay" || text == "Stay" || text == "S") return Move::stay();
    return Move::step(parse_direction(text, dim));
}

Move move_from_delta(std::span<const Coord> delta) {
    std::optional<Move> found;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (delta[i] == 0) continue;
        if (found || (delta[i] != 1 && delta[i] != -1))
            throw IllegalMove("move is not a unit step along one axis");
        found = Move::step(static_cast<int>(i), static_cast<int>(delta[i]));
    }
    return found.value_or(Move::stay());
}

void require_same_dim(const Point& p, const Point& q) {
    if (p.dim() != q.dim())
        throw ContractViolation("dimension mismatch: " + std::to_string(p.dim()) + " vs " +
                                std::to_string(q.dim()));
}

Coord l1_distance(const Point& p, const Point& q) {
    require_same_dim(p, q);
    Coord sum = 0;
    for (std::size_t j = 0; j < p.dim(); ++j) sum += std::llabs(p[j] - q[j]);
    return sum;
}

Coord l1_norm(const Point& p) {
    Coord sum = 0;
    for (Coord c : p) sum += std::llabs(c);
    return sum;
}

Coord chebyshev_norm(const Point& p) {
    Coord m = 0;
    for (Coord c : p) m = std::max<Coord>(m, std::llabs(c));
    return m;
}

namespace {

void require_axis(Direction dir, std::size_t dim) {
    if (dir.axis < 0 || static_cast<std::size_t>(dir.axis) >= dim || (dir.sign != 1 && dir.sign != -1))
        throw ContractViolation("direction " + dir.name() + " invalid for dimension " + std::to_string(dim));
}

}  // namespace

Coord shell_index(const Point& p, Direction dir, const Point& apex) {
    require_same_dim(p, apex);
    require_axis(dir, p.dim());
    const auto m = static_cast<std::size_t>(dir.axis);
    Coord off_axis = 0;
    for (std::size_t j = 0; j < p.dim(); ++j)
        if (j != m) off_axis += std::llabs(p[j] - apex[j]);
    return dir.sign * (p[m] - apex[m]) - off_axis;
}

Coord maxform_shell_index(const Point& p, Direction dir, const Point& apex) {
    require_same_dim(p, apex);
    require_axis(dir, p.dim());
    const auto m = static_cast<std::size_t>(dir.axis);
    Coord widest = 0;
    for (std::size_t j = 0; j < p.dim(); ++j)
        if (j != m) widest = std::max<Coord>(widest, std::llabs(p[j] - apex[j]));
    return dir.sign * (p[m] - apex[m]) - widest;
}

bool shell_shift_bound(const Point& p, Direction dir, const Point& apex1, const Point& apex2) {
    return shell_index(p, dir, apex2) >= shell_index(p, dir, apex1) - l1_distance(apex1, apex2);
}

Point parse_point(std::string_view text) {
    std::vector<Coord> coords;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty() && token.front() == '+') token.remove_prefix(1);
        Coord value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
            throw std::invalid_argument("bad point '" + std::string(text) + "' (expected comma-separated integers)");
        coords.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Point(std::move(coords));
}

}  // namespace coplattice
