#include "coplattice/engine.hpp"
#include "coplattice/errors.hpp"
#include "coplattice/io.hpp"
#include "coplattice/session.hpp"
#ifdef COPLATTICE_HAS_WEBSOCKET
#include "coplattice/ws_server.hpp"
#endif

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace coplattice;

namespace {

constexpr int kExitCaptured = 0;
constexpr int kExitUsage = 1;
constexpr int kExitEscaped = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpecSource {
    std::string file;
    std::string preset;
    std::size_t dim = 2;

    void attach(CLI::App* cmd) {
        cmd->add_option("copset", file, "Copset JSON file")->check(CLI::ExistingFile);
        cmd->add_option("--preset", preset, "Built-in copset instead of a file")
            ->check(CLI::IsMember(preset_names()));
        cmd->add_option("--dim", dim, "Dimension for --preset")->check(CLI::Range(1, 16));
    }

    CopSet load() const {
        if (file.empty() == preset.empty()) throw UsageError("give exactly one of a copset file or --preset");
        if (!preset.empty()) return preset_copset(preset, dim);
        try {
            return load_copset_file(file);
        } catch (const SpecError& e) {
            throw SpecError(e.field(), std::string(e.what()).substr(e.field().empty() ? 0 : e.field().size() + 2) +
                                           " (in " + file + ")");
        }
    }
};

int cmd_simulate(const SpecSource& src, const std::string& start, const std::string& policy_text, std::int64_t max_turns,
                 std::uint64_t seed, const std::string& trace_out, bool check) {
    const auto spec = src.load();
    Point robber;
    try {
        robber = parse_point(start);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--start: ") + e.what());
    }
    if (robber.dim() != spec.dim())
        throw UsageError("--start has " + std::to_string(robber.dim()) + " coordinates, copset has dimension " +
                         std::to_string(spec.dim()));
    RobberPolicy policy;
    try {
        policy = parse_policy(policy_text, spec.dim());
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--policy: ") + e.what());
    }
    GameConfig cfg{spec, robber, policy, max_turns, seed, check};
    const auto res = run_game(cfg);
    if (!trace_out.empty()) {
        std::ofstream out(trace_out, std::ios::binary);
        if (!out) throw UsageError("cannot write " + trace_out);
        out << to_ndjson(res.trace);
    }
    const auto& st = res.final_state.status;
    if (st.captured()) {
        std::cout << "CAPTURED turn=" << st.turn << " by=" << (st.by ? st.by->name() : "static") << '\n';
        return kExitCaptured;
    }
    std::cout << "ESCAPED horizon=" << max_turns << '\n';
    return kExitEscaped;
}

int cmd_classify(const SpecSource& src, const std::string& format) {
    const auto v = classify(src.load());
    if (format == "json") {
        std::cout << verdict_to_json(v).dump(2) << '\n';
        return 0;
    }
    std::cout << (v.winning() ? "WINNING" : "LOSING") << '\n';
    for (auto d : all_directions(v.census.dim())) {
        const auto& e = v.census[d];
        std::cout << "  " << std::left << std::setw(5) << d.name();
        if (e.unbounded) std::cout << "unbounded\n";
        else if (e.max_shell) std::cout << "bounded max_shell=" << *e.max_shell << '\n';
        else std::cout << "bounded (no cops)\n";
    }
    if (v.witness)
        std::cout << "witness direction=" << v.witness->direction.name() << " bound=" << v.witness->bound_shell
                  << " start=(" << v.witness->start.str() << ")\n";
    return 0;
}

int cmd_density(const SpecSource& src, Coord m_max, const std::string& emit, const std::string& out_path,
                std::uint64_t cell_budget) {
    const auto spec = src.load();
    DensityOptions opts;
    opts.cell_budget = cell_budget;
    const auto est = estimate_density(spec, m_max, opts);
    const auto analytic = analytic_density(spec, opts);

    if (emit == "csv") {
        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path, std::ios::binary);
            if (!file) throw UsageError("cannot write " + out_path);
        }
        std::ostream& out = out_path.empty() ? std::cout : file;
        out << "m,count,total,ratio\n";
        out << std::setprecision(12);
        for (const auto& r : est.rows) out << r.m << ',' << r.count << ',' << r.total << ',' << r.ratio_value() << '\n';
    }
    if (emit != "csv" || !out_path.empty()) {
        std::cout << std::setw(8) << "m" << std::setw(14) << "count" << std::setw(18) << "total" << "  ratio\n";
        std::cout << std::setprecision(8);
        for (const auto& r : est.rows)
            std::cout << std::setw(8) << r.m << std::setw(14) << r.count << std::setw(18) << r.total << "  "
                      << r.ratio_value() << '\n';
        std::cout << "analytic=" << (analytic ? analytic->str() : "unknown") << '\n';
    }
    if (est.truncated) std::cerr << "warning: truncated after m=" << est.rows.size() << ": " << est.truncation_reason << '\n';
    return 0;
}

int cmd_counterexample(std::size_t dim, Coord depth, std::int64_t turns) {
    if (dim < 3) throw UsageError("--dim must be >= 3; in dimension <= 2 the max-form and sum-form cones coincide");
    if (depth < 1) throw UsageError("--depth must be >= 1");
    const auto ce = maxform_counterexample(dim, depth);
    std::cout << "construction: for a in 1.." << depth << " and each direction (m, s), the point with s*x_m = 3a and "
              << "every other coordinate 2a (" << ce.entries.size() << " cops in Z^" << dim << ")\n";
    std::cout << std::left << std::setw(24) << "point" << std::setw(6) << "dir" << std::setw(5) << "a" << std::setw(10)
              << "maxform" << std::setw(8) << "sum" << "intercepts X1+ runner\n";
    for (const auto& e : ce.entries) {
        std::cout << std::setw(24) << ("(" + e.point.str() + ")") << std::setw(6) << e.direction.name() << std::setw(5)
                  << e.level << std::setw(10) << e.maxform_shell << std::setw(8) << e.sum_shell
                  << (e.interceptable ? "yes" : "no") << '\n';
    }
    std::cout << "max-form members: " << (ce.all_maxform_members ? "all" : "NOT all") << '\n';
    std::cout << "cops able to intercept the X1+ runner from the origin: " << ce.interceptable_count << '\n';
    GameConfig cfg{ce.copset, Point::origin(dim), AxisRunner{{0, 1}}, turns};
    const auto res = run_game(cfg);
    std::cout << "runner X1+ from the origin over " << turns << " turns: "
              << (res.final_state.status.captured() ? "CAPTURED turn=" + std::to_string(res.final_state.status.turn)
                                                    : std::string("ESCAPED"))
              << '\n';
    return 0;
}

int cmd_serve(const std::string& bind, unsigned short port, long idle_secs, bool stdio) {
    SessionOptions opts;
    opts.idle_timeout = std::chrono::seconds(idle_secs);
    SessionManager manager(opts);
    if (stdio) {
        serve_stdio(manager, std::cin, std::cout);
        return 0;
    }
#ifdef COPLATTICE_HAS_WEBSOCKET
    WebSocketServer server(manager);
    const auto bound = server.start(bind, port);
    std::cerr << "listening on ws://" << bind << ':' << bound << '\n';
    server.wait();
    server.stop();
    return 0;
#else
    (void)bind;
    (void)port;
    throw UsageError("built without WebSocket support; use --stdio");
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cops and robbers on the integer lattice"};
    app.require_subcommand(1);

    SpecSource sim_src;
    std::string start, policy = "greedy", trace_out;
    std::int64_t max_turns = 10'000;
    std::uint64_t seed = 0;
    bool check = false;
    auto* sim = app.add_subcommand("simulate", "Play one game and report the outcome");
    sim_src.attach(sim);
    sim->add_option("--start", start, "Robber start, e.g. 1,1")->required();
    sim->add_option("--policy", policy, "greedy | runner:X2- | random[:seed] | script:X1+,stay,...");
    sim->add_option("--max-turns", max_turns, "Horizon")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "Game seed");
    sim->add_option("--trace-out", trace_out, "Write the NDJSON trace here");
    sim->add_flag("--check-invariants", check, "Assert potential descent and sidedness every turn");

    SpecSource cls_src;
    std::string format = "text";
    auto* cls = app.add_subcommand("classify", "Winning/losing verdict with per-direction census");
    cls_src.attach(cls);
    cls->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    SpecSource den_src;
    Coord m_max = 100;
    std::string emit, out_path;
    std::uint64_t cell_budget = DensityOptions{}.cell_budget;
    auto* den = app.add_subcommand("density", "Ratios |A ∩ [-m,m]^n| / (2m+1)^n");
    den_src.attach(den);
    den->add_option("--m-max", m_max)->check(CLI::Range(Coord{1}, Coord{1'000'000'000}));
    den->add_option("--emit", emit)->check(CLI::IsMember({"csv"}));
    den->add_option("--out", out_path, "CSV destination (stdout when omitted)");
    den->add_option("--cell-budget", cell_budget, "Points the enumeration fallback may visit");

    std::size_t ce_dim = 3;
    Coord depth = 10;
    std::int64_t ce_turns = 1000;
    auto* ce = app.add_subcommand("demo-counterexample", "Max-form cone hypothesis that still loses");
    ce->add_option("--dim", ce_dim);
    ce->add_option("--depth", depth);
    ce->add_option("--turns", ce_turns)->check(CLI::PositiveNumber);

    std::string bind = "127.0.0.1";
    unsigned short port = 8765;
    long idle = 1800;
    bool stdio = false;
    auto* serve = app.add_subcommand("serve", "Interactive session service");
    serve->add_option("--port", port);
    serve->add_option("--bind", bind);
    serve->add_option("--idle-timeout-secs", idle)->check(CLI::PositiveNumber);
    serve->add_flag("--stdio", stdio, "Line-delimited JSON on stdin/stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*sim) return cmd_simulate(sim_src, start, policy, max_turns, seed, trace_out, check);
        if (*cls) return cmd_classify(cls_src, format);
        if (*den) return cmd_density(den_src, m_max, emit, out_path, cell_budget);
        if (*ce) return cmd_counterexample(ce_dim, depth, ce_turns);
        if (*serve) return cmd_serve(bind, port, idle, stdio);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
