#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coplattice/engine.hpp"
#include "coplattice/errors.hpp"
#include "coplattice/io.hpp"
#include "coplattice/session.hpp"

namespace py = pybind11;
using namespace coplattice;

namespace {

CopSet spec_from(const std::string& text) { return parse_copset(text); }

py::tuple simulate(const std::string& spec, const std::vector<Coord>& start, const std::string& policy,
                   std::int64_t max_turns, std::uint64_t seed, bool check_invariants) {
    const auto cs = spec_from(spec);
    GameConfig cfg{cs, Point(start), parse_policy(policy, cs.dim()), max_turns, seed, check_invariants};
    GameResult res;
    {
        py::gil_scoped_release release;
        res = run_game(cfg);
    }
    const auto& st = res.final_state.status;
    return py::make_tuple(st.str(), st.turn, res.bound, to_ndjson(res.trace));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cops and robbers on Z^n";

    py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<BoundedDirection>(m, "BoundedDirection", PyExc_LookupError);
    py::register_exception<IllegalMove>(m, "IllegalMove", PyExc_ValueError);

    m.def("l1_distance", [](const std::vector<Coord>& p, const std::vector<Coord>& q) {
        return l1_distance(Point(p), Point(q));
    });
    m.def("shell_index", [](const std::vector<Coord>& p, const std::string& dir, const std::vector<Coord>& apex) {
        return shell_index(Point(p), parse_direction(dir, p.size()), Point(apex));
    });
    m.def("interception_predicate",
          [](const std::vector<Coord>& cop, const std::vector<Coord>& start, const std::string& dir) {
              return interception_predicate(Point(cop), Point(start), parse_direction(dir, cop.size()));
          });

    m.def("preset", [](const std::string& name, std::size_t dim) { return copset_to_json(preset_copset(name, dim)).dump(); },
          py::arg("name"), py::arg("dim") = 2);
    m.def("normalize", [](const std::string& spec) { return copset_to_json(spec_from(spec)).dump(); });
    m.def("contains", [](const std::string& spec, const std::vector<Coord>& p) { return spec_from(spec).contains(Point(p)); });
    m.def("classify", [](const std::string& spec) { return verdict_to_json(classify(spec_from(spec))).dump(); });
    m.def("find_cop_in_cone",
          [](const std::string& spec, const std::string& dir, const std::vector<Coord>& apex, Coord min_shell,
             const std::vector<std::vector<Coord>>& exclude) {
              const auto cs = spec_from(spec);
              std::vector<Point> ex(exclude.begin(), exclude.end());
              return find_cop_in_cone(cs, parse_direction(dir, cs.dim()), Point(apex), min_shell, ex).vec();
          },
          py::arg("spec"), py::arg("direction"), py::arg("apex"), py::arg("min_shell"),
          py::arg("exclude") = std::vector<std::vector<Coord>>{});
    m.def("analytic_density", [](const std::string& spec) -> std::optional<std::pair<std::int64_t, std::int64_t>> {
        auto d = analytic_density(spec_from(spec));
        if (!d) return std::nullopt;
        return std::make_pair(d->num, d->den);
    });
    m.def("estimate_density", [](const std::string& spec, Coord m_max) {
        const auto est = estimate_density(spec_from(spec), m_max);
        std::vector<std::tuple<Coord, std::uint64_t, std::uint64_t>> rows;
        for (const auto& r : est.rows) rows.emplace_back(r.m, r.count, r.total);
        return py::make_tuple(rows, est.truncated);
    });
    m.def("simulate", &simulate, py::arg("spec"), py::arg("start"), py::arg("policy") = "greedy",
          py::arg("max_turns") = 10'000, py::arg("seed") = 0, py::arg("check_invariants") = false);

    py::class_<SessionManager>(m, "SessionManager")
        .def(py::init([](long idle_timeout_secs) {
                 SessionOptions o;
                 o.idle_timeout = std::chrono::seconds(idle_timeout_secs);
                 return std::make_unique<SessionManager>(o);
             }),
             py::arg("idle_timeout_secs") = 1800)
        .def("handle", [](SessionManager& s, const std::string& line) {
            py::gil_scoped_release release;
            return s.handle_line(line);
        });
}
