#include "coplattice/io.hpp"

#include "coplattice/errors.hpp"

#include <fstream>
#include <sstream>

namespace coplattice {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SpecError(path + "." + key, "missing");
    return *it;
}

Coord integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SpecError(path, "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(kCoordLimit))
        throw SpecError(path, "magnitude exceeds 2^52");
    return v.get<Coord>();
}

Coord integer_field(const json& obj, const char* key, const std::string& path, std::optional<Coord> fallback = {}) {
    if (fallback && !obj.contains(key)) return *fallback;
    return integer(field(obj, key, path), path + "." + key);
}

std::vector<Coord> integer_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw SpecError(path, "expected an array of integers");
    std::vector<Coord> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

int parse_sign(const json& v, const std::string& path) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "+") return 1;
        if (s == "-") return -1;
    } else if (v.is_number_integer()) {
        const auto s = v.get<Coord>();
        if (s == 1 || s == -1) return static_cast<int>(s);
    }
    throw SpecError(path, "expected \"+\" or \"-\"");
}

SignSet parse_signs(const json& obj, const std::string& path) {
    if (!obj.contains("signs")) return {};
    const auto& v = obj["signs"];
    const auto p = path + ".signs";
    if (!v.is_array() || v.empty()) throw SpecError(p, "expected a nonempty array of \"+\"/\"-\"");
    SignSet s{false, false};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (parse_sign(v[i], p + "[" + std::to_string(i) + "]") > 0)
            s.plus = true;
        else
            s.minus = true;
    }
    return s;
}

int parse_axis(const json& obj, const std::string& path) {
    const Coord a = integer_field(obj, "axis", path);
    if (a < 1 || a > 1 << 20) throw SpecError(path + ".axis", "must be a 1-based axis index");
    return static_cast<int>(a - 1);
}

ordered_json signs_json(const SignSet& s) {
    ordered_json out = ordered_json::array();
    if (s.plus) out.push_back("+");
    if (s.minus) out.push_back("-");
    return out;
}

Generator parse_generator(const json& g, std::size_t dim, const std::string& path) {
    if (!g.is_object()) throw SpecError(path, "expected an object");
    const auto& kind_v = field(g, "kind", path);
    if (!kind_v.is_string()) throw SpecError(path + ".kind", "expected a string");
    const auto kind = kind_v.get<std::string>();
    if (kind == "explicit") {
        const auto& pts = field(g, "points", path);
        if (!pts.is_array()) throw SpecError(path + ".points", "expected an array of points");
        ExplicitFinite e;
        for (std::size_t i = 0; i < pts.size(); ++i)
            e.points.emplace_back(integer_array(pts[i], path + ".points[" + std::to_string(i) + "]"));
        return e;
    }
    if (kind == "axis_geometric") {
        AxisGeometric a;
        a.axis = parse_axis(g, path);
        a.base = integer_field(g, "base", path);
        a.signs = parse_signs(g, path);
        const Coord e = integer_field(g, "startExponent", path, 0);
        if (e < 0 || e > 64) throw SpecError(path + ".startExponent", "must be in 0..64");
        a.start_exponent = static_cast<int>(e);
        return a;
    }
    if (kind == "axis_arithmetic") {
        AxisArithmetic a;
        a.axis = parse_axis(g, path);
        a.step = integer_field(g, "step", path);
        a.offset = integer_field(g, "offset", path, 0);
        a.signs = parse_signs(g, path);
        return a;
    }
    if (kind == "sublattice") {
        Sublattice s;
        s.moduli = integer_array(field(g, "moduli", path), path + ".moduli");
        s.residues = g.contains("residues") ? integer_array(g["residues"], path + ".residues")
                                            : std::vector<Coord>(s.moduli.size(), 0);
        return s;
    }
    if (kind == "half_space") {
        HalfSpace h;
        h.axis = parse_axis(g, path);
        h.sign = g.contains("sign") ? parse_sign(g["sign"], path + ".sign") : 1;
        h.threshold = integer_field(g, "threshold", path, 0);
        return h;
    }
    (void)dim;
    throw SpecError(path + ".kind", "unknown kind '" + kind + "'");
}

}  // namespace

CopSet copset_from_json(const json& doc) {
    if (!doc.is_object()) throw SpecError("", "expected a JSON object");
    const Coord dim = integer_field(doc, "dimension", "", std::nullopt);
    if (dim < 1 || dim > 64) throw SpecError("dimension", "must be in 1..64");
    const auto& gens = field(doc, "generators", "");
    if (!gens.is_array()) throw SpecError("generators", "expected an array");
    std::vector<Generator> out;
    for (std::size_t i = 0; i < gens.size(); ++i)
        out.push_back(parse_generator(gens[i], static_cast<std::size_t>(dim), "generators[" + std::to_string(i) + "]"));
    return CopSet(static_cast<std::size_t>(dim), std::move(out));
}

ordered_json copset_to_json(const CopSet& spec) {
    ordered_json gens = ordered_json::array();
    for (const auto& g : spec.generators()) {
        gens.push_back(std::visit(
            overloaded{
                [](const ExplicitFinite& e) {
                    ordered_json pts = ordered_json::array();
                    for (const auto& p : e.points) pts.push_back(p.vec());
                    return ordered_json{{"kind", "explicit"}, {"points", pts}};
                },
                [](const AxisGeometric& a) {
                    return ordered_json{{"kind", "axis_geometric"}, {"axis", a.axis + 1}, {"base", a.base},
                                        {"signs", signs_json(a.signs)}, {"startExponent", a.start_exponent}};
                },
                [](const AxisArithmetic& a) {
                    return ordered_json{{"kind", "axis_arithmetic"}, {"axis", a.axis + 1}, {"step", a.step},
                                        {"offset", a.offset}, {"signs", signs_json(a.signs)}};
                },
                [](const Sublattice& s) {
                    return ordered_json{{"kind", "sublattice"}, {"moduli", s.moduli}, {"residues", s.residues}};
                },
                [](const HalfSpace& h) {
                    return ordered_json{{"kind", "half_space"}, {"axis", h.axis + 1},
                                        {"sign", h.sign > 0 ? "+" : "-"}, {"threshold", h.threshold}};
                },
            },
            g));
    }
    ordered_json out;
    out["dimension"] = spec.dim();
    out["generators"] = std::move(gens);
    return out;
}

CopSet parse_copset(std::string_view text) {
    // Track line starts so byte offsets from the parser become line/column.
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
        throw SpecError("line " + std::to_string(line) + ", column " + std::to_string(col), msg);
    }
    return copset_from_json(doc);
}

CopSet load_copset_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("", "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_copset(ss.str());
}

ordered_json census_to_json(const DirectionCensus& census) {
    ordered_json out = ordered_json::object();
    for (auto d : all_directions(census.dim())) {
        const auto& e = census[d];
        if (e.unbounded) {
            out[d.name()] = ordered_json{{"bounded", false}};
        } else {
            out[d.name()] = ordered_json{
                {"bounded", true},
                {"maxShell", e.max_shell ? ordered_json(*e.max_shell) : ordered_json("empty")}};
        }
    }
    return out;
}

ordered_json verdict_to_json(const Verdict& v) {
    ordered_json out;
    out["outcome"] = v.winning() ? "WINNING" : "LOSING";
    out["census"] = census_to_json(v.census);
    if (v.witness) {
        out["witness"] = ordered_json{{"direction", v.witness->direction.name()},
                                      {"boundShell", v.witness->bound_shell},
                                      {"start", v.witness->start.vec()}};
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

RobberPolicy parse_policy(std::string_view text, std::size_t dim) {
    const auto colon = text.find(':');
    const auto head = std::string(text.substr(0, colon));
    const auto arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (head == "greedy") return GreedyEvader{};
    if (head == "runner") return AxisRunner{parse_direction(arg, dim)};
    if (head == "random") {
        if (arg.empty()) return RandomWalk{};
        try {
            std::size_t used = 0;
            const auto seed = std::stoull(std::string(arg), &used);
            if (used == arg.size()) return RandomWalk{seed};
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("bad random seed '" + std::string(arg) + "'");
    }
    if (head == "script") {
        Scripted s;
        std::size_t pos = 0;
        while (pos <= arg.size() && !arg.empty()) {
            const auto comma = arg.find(',', pos);
            s.moves.push_back(parse_move(arg.substr(pos, comma - pos), dim));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return s;
    }
    // Bare direction names are runners.
    if (colon == std::string_view::npos) {
        try {
            return AxisRunner{parse_direction(text, dim)};
        } catch (const std::invalid_argument&) {
        }
    }
    throw std::invalid_argument("unknown policy '" + std::string(text) + "'");
}

}  // namespace coplattice
