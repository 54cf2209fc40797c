#pragma once

#include "coplattice/copset.hpp"
#include "coplattice/strategy.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace coplattice {

// {"dimension": n, "generators": [{"kind": "explicit" | "axis_geometric" |
// "axis_arithmetic" | "sublattice" | "half_space", ...}]}. Axes are 1-based.
// Throws SpecError naming the offending field.
CopSet copset_from_json(const nlohmann::json& doc);
nlohmann::ordered_json copset_to_json(const CopSet& spec);

// Syntax errors are reported as SpecError("line L, column C", ...).
CopSet parse_copset(std::string_view text);
CopSet load_copset_file(const std::filesystem::path& path);

nlohmann::ordered_json census_to_json(const DirectionCensus& census);
nlohmann::ordered_json verdict_to_json(const Verdict& verdict);

// "greedy", "runner:X2-", "random", "random:<seed>", "script:X1+,stay,X2-".
RobberPolicy parse_policy(std::string_view text, std::size_t dim);

}  // namespace coplattice
