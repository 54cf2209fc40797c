#pragma once

#include "coplattice/lattice.hpp"
#include "coplattice/product_set.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace coplattice {

struct SignSet {
    bool plus = true;
    bool minus = true;

    bool has(int sign) const noexcept { return sign > 0 ? plus : minus; }
    friend bool operator==(const SignSet&, const SignSet&) = default;
};

// Finitely many listed cops.
struct ExplicitFinite {
    std::vector<Point> points;
};

// Cops at sign * base^k * e_axis for every k >= start_exponent.
struct AxisGeometric {
    int axis = 0;
    Coord base = 2;
    SignSet signs;
    int start_exponent = 0;
};

// Cops at sign * (offset + k * step) * e_axis for every k >= 0.
struct AxisArithmetic {
    int axis = 0;
    Coord step = 1;
    Coord offset = 0;
    SignSet signs;
};

// Cops at every point with coords congruent to residues modulo moduli.
struct Sublattice {
    std::vector<Coord> moduli;
    std::vector<Coord> residues;
};

// Cops at every point with sign * x_axis >= threshold.
struct HalfSpace {
    int axis = 0;
    int sign = 1;
    Coord threshold = 0;
};

using Generator = std::variant<ExplicitFinite, AxisGeometric, AxisArithmetic, Sublattice, HalfSpace>;

// Largest coordinate magnitude a generator may produce or a query may use.
inline constexpr Coord kCoordLimit = Coord{1} << 52;

// A possibly infinite cop configuration: the union of its generators.
class CopSet {
public:
    // Validates every generator; throws SpecError with a field path.
    CopSet(std::size_t dim, std::vector<Generator> generators);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Generator>& generators() const noexcept { return generators_; }

    bool contains(const Point& p) const;

    // Generators rewritten as per-coordinate constraint products (dense part)
    // plus the finite/sparse remainder.
    const std::vector<ProductSet>& products() const noexcept { return products_; }

private:
    std::size_t dim_;
    std::vector<Generator> generators_;
    std::vector<ProductSet> products_;
};

struct CensusEntry {
    bool unbounded = false;
    // Supremum of shell indices about the origin when bounded; empty when the
    // set holds no cops at all.
    std::optional<Coord> max_shell;

    static CensusEntry make_unbounded() { return {true, std::nullopt}; }
    static CensusEntry bounded(std::optional<Coord> max) { return {false, max}; }
    friend bool operator==(const CensusEntry&, const CensusEntry&) = default;
};

class DirectionCensus {
public:
    explicit DirectionCensus(std::size_t dim) : dim_(dim), entries_(2 * dim, CensusEntry::bounded(std::nullopt)) {}

    std::size_t dim() const noexcept { return dim_; }
    const CensusEntry& operator[](Direction d) const { return entries_.at(d.index()); }
    CensusEntry& operator[](Direction d) { return entries_.at(d.index()); }
    const std::vector<CensusEntry>& entries() const noexcept { return entries_; }
    bool all_unbounded() const;

    friend bool operator==(const DirectionCensus&, const DirectionCensus&) = default;

private:
    std::size_t dim_;
    std::vector<CensusEntry> entries_;
};

struct EscapeWitness {
    Direction direction;
    Coord bound_shell = 0;
    Point start;
};

enum class Outcome { Winning, Losing };

struct Verdict {
    Outcome outcome = Outcome::Losing;
    DirectionCensus census;
    std::optional<EscapeWitness> witness;

    bool winning() const noexcept { return outcome == Outcome::Winning; }
};

DirectionCensus census(const CopSet& spec);
Verdict classify(const CopSet& spec);

// Cop with shell_index(c, dir, apex) >= min_shell not in `exclude`, minimizing
// (shell, L1 distance to apex, coordinates lexicographically). Throws
// BoundedDirection when none exists.
Point find_cop_in_cone(const CopSet& spec, Direction dir, const Point& apex, Coord min_shell,
                       std::span<const Point> exclude = {});

// Same search but returns nullopt instead of throwing.
std::optional<Point> try_find_cop_in_cone(const CopSet& spec, Direction dir, const Point& apex, Coord min_shell,
                                          std::span<const Point> exclude = {});

struct DensityOptions {
    // Inclusion-exclusion terms allowed before falling back to enumeration.
    std::size_t max_terms = std::size_t{1} << 16;
    // Lattice points the enumeration fallback may visit in total.
    std::uint64_t cell_budget = 50'000'000;
};

// Exact natural density when the inclusion-exclusion stays within budget.
std::optional<Rational> analytic_density(const CopSet& spec, const DensityOptions& options = {});

struct DensityRow {
    Coord m = 0;
    std::uint64_t count = 0;
    std::uint64_t total = 0;

    Rational ratio() const;
    double ratio_value() const { return static_cast<double>(count) / static_cast<double>(total); }
};

struct DensityEstimate {
    std::vector<DensityRow> rows;
    bool truncated = false;
    std::string truncation_reason;
    bool enumerated = false;  // true when the fallback point enumeration was used
};

// |A ∩ [-m,m]^n| / (2m+1)^n for m = 1..m_max.
DensityEstimate estimate_density(const CopSet& spec, Coord m_max, const DensityOptions& options = {});

struct CounterexampleEntry {
    Point point;
    Direction direction;
    Coord level = 0;           // a
    Coord maxform_shell = 0;   // equals a for every entry
    Coord sum_shell = 0;
    bool maxform_member = false;
    bool interceptable = false;  // against the +X1 runner from the origin
};

struct MaxformCounterexample {
    CopSet copset;
    std::vector<CounterexampleEntry> entries;
    bool all_maxform_members = false;
    std::size_t interceptable_count = 0;
};

// For each level a in 1..depth and direction (m, s): the point with s*x_m = 3a
// and every other coordinate 2a. Requires dim >= 3.
MaxformCounterexample maxform_counterexample(std::size_t dim, Coord depth);

// Named fixtures: "theorem1", "halfplane", "sublattice", "finite", "empty".
CopSet preset_copset(const std::string& name, std::size_t dim = 2);
std::vector<std::string> preset_names();

}  // namespace coplattice
