#include "hypfred/cli.hpp"
#include "hypfred/builtins.hpp"
#include "hypfred/characteristics.hpp"
#include "hypfred/convergence.hpp"
#include "hypfred/error.hpp"
#include "hypfred/fredholm.hpp"
#include "hypfred/levy.hpp"
#include "hypfred/problem_file.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace hypfred {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct RunConfig {
    std::string problem;
    std::string builtin;
    int nx = 33;
    int nt = 32;
    std::optional<double> tau;
    int threads = 1;
    std::string out = ".";
    std::string exact;
    std::string grids = "17x16,33x32,65x64";
    std::optional<double> delta;
    double tol = 1e-8;
    bool timings = false;
    bool sigma_trend = false;
    long full_svd_limit = 2500;
    // debug commands
    std::string part = "k";
    int component = 1;
    double x = 0.5;
    double t = 0.0;
};

struct Loaded {
    ProblemData data;
    std::string label;
    std::vector<expr::Expr> exact;  // from the built-in, if any
};

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

Loaded load(const RunConfig& cfg) {
    if (cfg.problem.empty() == cfg.builtin.empty()) {
        throw ValidationError("exactly one of --problem and --builtin is required");
    }
    if (!cfg.builtin.empty()) {
        const Builtin& b = builtin(cfg.builtin);
        return {b.data, b.name, b.exact};
    }
    return {read_problem(fs::path(cfg.problem)), cfg.problem, {}};
}

std::vector<expr::Expr> parse_list(const std::string& text, const char* flag) {
    std::vector<expr::Expr> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(expr::parse(item));
        } catch (const Error& e) {
            throw ValidationError(std::string(flag) + ": " + e.what() + " in \"" + item + "\"");
        }
    }
    return out;
}

Grid run_grid(const RunConfig& cfg) { return Grid(cfg.nx, cfg.nt); }

ordered_json grid_json(const Grid& g) { return {{"nx", g.nx()}, {"nt", g.nt()}}; }

fs::path out_path(const RunConfig& cfg, const std::string& file) {
    fs::create_directories(cfg.out);
    return fs::path(cfg.out) / file;
}

void write_json(const RunConfig& cfg, const std::string& file, const ordered_json& doc) {
    std::ofstream f(out_path(cfg, file));
    if (!f) throw Error("cannot write " + file);
    f << doc.dump(2) << '\n';
}

void write_grid_csv(const RunConfig& cfg, const std::string& file, const GridFunction& g) {
    std::ofstream f(out_path(cfg, file));
    if (!f) throw Error("cannot write " + file);
    write_csv(f, g);
}

GridFunction vector_to_grid(const Grid& grid, int n, const Eigen::VectorXd& v) {
    return GridFunction(grid, n, std::vector<double>(v.data(), v.data() + v.size()));
}

ordered_json header(const char* command, const Loaded& problem, const Grid& grid, int n) {
    ordered_json doc;
    doc["command"] = command;
    doc["problem"] = problem.label;
    doc["grid"] = grid_json(grid);
    doc["unknowns"] = grid.size(n);
    return doc;
}

ordered_json spectrum_json(const FredholmReport& r) {
    ordered_json s;
    s["complete"] = r.spectrum_complete;
    s["sigma_max"] = r.sigma_max;
    s["sigma_min"] = r.sigma_min;
    s["values"] = std::vector<double>(r.singular_values.data(), r.singular_values.data() + r.singular_values.size());
    return s;
}

struct Solved {
    Loaded problem;
    OperatorMatrix matrix;
    FredholmReport report;
    double assembly_seconds;
};

Solved solve_problem(const RunConfig& cfg) {
    Loaded problem = load(cfg);
    const ProblemSpec spec(problem.data);
    const Grid grid = run_grid(cfg);
    auto start = Clock::now();
    OperatorMatrix m = assemble(spec, grid, {.threads = cfg.threads});
    const double assembly = since(start);
    AlternativeOptions alt;
    alt.tau = cfg.tau;
    alt.full_svd_limit = cfg.full_svd_limit;
    FredholmReport report = solve_alternative(m, alt);
    return {std::move(problem), std::move(m), std::move(report), assembly};
}

ordered_json timings_json(const Solved& s) {
    return {{"assembly", s.assembly_seconds},
            {"spectrum", s.report.seconds.spectrum},
            {"solve", s.report.seconds.solve}};
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const Solved s = solve_problem(cfg);
    const FredholmReport& r = s.report;
    ordered_json doc = header("solve", s.problem, s.matrix.grid, s.matrix.n);
    doc["branch"] = r.unique ? "unique" : "resonant";
    doc["tau"] = r.tau;
    doc["kernel_dim"] = r.kernel_dim;
    doc["defect"] = r.defect;
    doc["solve_residual"] = r.solve_residual;
    doc["norm_inf_A"] = r.a_norm_inf;
    doc["solution_sup_norm"] = sup_norm(r.solution);
    doc["spectrum"] = spectrum_json(r);
    if (cfg.timings) doc["timings"] = timings_json(s);
    write_json(cfg, "report.json", doc);
    write_grid_csv(cfg, "solution.csv", r.solution);

    out << (r.unique ? "unique solution" : "resonant: kernel_dim = " + std::to_string(r.kernel_dim))
        << ", sigma_min = " << r.sigma_min << ", tau = " << r.tau << ", defect = " << r.defect << '\n';
    return r.unique ? kExitOk : kExitResonant;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    const Solved s = solve_problem(cfg);
    const FredholmReport& r = s.report;
    ordered_json doc = header("spectrum", s.problem, s.matrix.grid, s.matrix.n);
    doc["tau"] = r.tau;
    doc["kernel_dim"] = r.kernel_dim;
    doc["spectrum"] = spectrum_json(r);
    if (cfg.timings) doc["timings"] = timings_json(s);
    write_json(cfg, "spectrum.json", doc);

    // Index is the position in the full descending spectrum (1-based).
    std::ofstream csv(out_path(cfg, "spectrum.csv"));
    csv << "index,sigma\n";
    const Eigen::Index n = s.matrix.size();
    const Eigen::Index count = r.singular_values.size();
    char buf[64];
    for (Eigen::Index i = 0; i < count; ++i) {
        const Eigen::Index index = (r.spectrum_complete || i == 0) ? i + 1 : n - (count - 1 - i);
        std::snprintf(buf, sizeof buf, "%.17g", r.singular_values(i));
        csv << index << ',' << buf << '\n';
    }
    out << "sigma_max = " << r.sigma_max << ", sigma_min = " << r.sigma_min << ", " << count << " of " << n
        << " singular values\n";
    return kExitOk;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
    const Solved s = solve_problem(cfg);
    const FredholmReport& r = s.report;
    ordered_json doc = header("kernel", s.problem, s.matrix.grid, s.matrix.n);
    doc["tau"] = r.tau;
    doc["kernel_dim"] = r.kernel_dim;
    doc["defect"] = r.defect;
    ordered_json modes = ordered_json::array();
    const Eigen::Index count = r.kernel_dim;
    for (Eigen::Index c = 0; c < count; ++c) {
        const Eigen::VectorXd v = r.kernel.col(c);
        const double sigma = r.singular_values(r.singular_values.size() - 1 - c);
        const std::string file = "kernel_" + std::to_string(c + 1) + ".csv";
        modes.push_back({{"sigma", sigma}, {"residual", (s.matrix.a * v).norm()}, {"file", file}});
        write_grid_csv(cfg, file, vector_to_grid(s.matrix.grid, s.matrix.n, v));
    }
    doc["modes"] = modes;
    if (cfg.timings) doc["timings"] = timings_json(s);
    write_json(cfg, "kernel.json", doc);
    out << "kernel_dim = " << r.kernel_dim << " (tau = " << r.tau << ")\n";
    return kExitOk;
}

int cmd_check_levy(const RunConfig& cfg, std::ostream& out) {
    const Loaded problem = load(cfg);
    const ProblemSpec spec(problem.data);
    const Grid grid = run_grid(cfg);
    LevyOptions opts;
    opts.delta = cfg.delta;
    opts.tol = cfg.tol;
    const LevyReport rep = check_levy(spec, grid, opts);

    ordered_json doc = header("check-levy", problem, grid, spec.n());
    doc["banner"] = LevyReport::kBanner;
    doc["delta"] = rep.delta;
    doc["tol"] = rep.tol;
    doc["pass"] = rep.pass;
    ordered_json pairs = ordered_json::array();
    std::ofstream csv(out_path(cfg, "check-levy.csv"));
    csv << "j,k,pass,bound,worst_excess,x,t\n";
    char buf[160];
    out << LevyReport::kBanner << '\n';
    for (const LevyPair& pr : rep.pairs) {
        pairs.push_back({{"j", pr.j + 1},
                         {"k", pr.k + 1},
                         {"pass", pr.pass},
                         {"bound", pr.bound},
                         {"worst_excess", pr.worst_excess},
                         {"witness", {{"i", pr.i}, {"q", pr.q}, {"x", pr.x}, {"t", pr.t}}}});
        std::snprintf(buf, sizeof buf, "%d,%d,%s,%.17g,%.17g,%.17g,%.17g\n", pr.j + 1, pr.k + 1,
                      pr.pass ? "PASS" : "FAIL", pr.bound, pr.worst_excess, pr.x, pr.t);
        csv << buf;
        std::snprintf(buf, sizeof buf, "pair (%d,%d): %s  M = %.6g  worst excess %.3g at (x,t) = (%.6g, %.6g)\n",
                      pr.j + 1, pr.k + 1, pr.pass ? "PASS" : "FAIL", pr.bound, pr.worst_excess, pr.x, pr.t);
        out << buf;
    }
    doc["pairs"] = pairs;
    write_json(cfg, "check-levy.json", doc);
    return kExitOk;
}

void write_table(const RunConfig& cfg, const char* command, const Loaded& problem, const StudyTable& table,
                 std::ostream& out) {
    ordered_json doc;
    doc["command"] = command;
    doc["problem"] = problem.label;
    doc["quantity"] = name(table.quantity);
    doc["exact"] = table.exact;
    ordered_json rows = ordered_json::array();
    std::ofstream csv(out_path(cfg, std::string(command) + ".csv"));
    csv << "nx,nt," << name(table.quantity) << ",order\n";
    char buf[128];
    for (const StudyRow& r : table.rows) {
        ordered_json row = {{"nx", r.grid.nx()}, {"nt", r.grid.nt()}, {"value", r.value}};
        row["order"] = r.order ? ordered_json(*r.order) : ordered_json(nullptr);
        rows.push_back(row);
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,", r.grid.nx(), r.grid.nt(), r.value);
        csv << buf;
        if (r.order) {
            std::snprintf(buf, sizeof buf, "%.17g", *r.order);
            csv << buf;
        } else if (table.exact) {
            csv << "exact";
        }
        csv << '\n';
        std::snprintf(buf, sizeof buf, "%5d x %-5d %-10s %.6e", r.grid.nx(), r.grid.nt(), name(table.quantity),
                      r.value);
        out << buf;
        if (r.order) {
            std::snprintf(buf, sizeof buf, "  order %.3f", *r.order);
            out << buf;
        }
        out << '\n';
    }
    if (table.exact) out << "all values at rounding level (exact)\n";
    doc["rows"] = rows;
    write_json(cfg, std::string(command) + ".json", doc);
}

int cmd_converge(const RunConfig& cfg, std::ostream& out) {
    const Loaded problem = load(cfg);
    const ProblemSpec spec(problem.data);
    std::optional<std::vector<expr::Expr>> exact;
    if (!cfg.exact.empty()) {
        exact = parse_list(cfg.exact, "--exact");
    } else if (!problem.exact.empty() && !cfg.sigma_trend) {
        exact = problem.exact;
    }
    const StudyTable table =
        convergence_study(spec, exact, parse_grids(cfg.grids), {cfg.threads, cfg.full_svd_limit});
    write_table(cfg, "converge", problem, table, out);
    return kExitOk;
}

int cmd_residual(const RunConfig& cfg, std::ostream& out) {
    const Loaded problem = load(cfg);
    const ProblemSpec spec(problem.data);
    if (cfg.exact.empty()) throw ValidationError("--exact: a candidate solution is required");
    const StudyTable table = residual_study(spec, parse_list(cfg.exact, "--exact"), parse_grids(cfg.grids),
                                            {cfg.threads, cfg.full_svd_limit});
    write_table(cfg, "residual", problem, table, out);
    return kExitOk;
}

int cmd_list(std::ostream& out) {
    for (const Builtin& b : builtins()) out << b.name << "  " << b.summary << '\n';
    return kExitOk;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out) {
    const Loaded problem = load(cfg);
    const ProblemSpec spec(problem.data);
    const int j = cfg.component - 1;
    if (j < 0 || j >= spec.n()) throw RangeError("--component must lie in [1, n]");
    const CharacteristicCurve cv =
        trace(spec, j, cfg.x, cfg.t, spec.boundary(j), TraceSettings::for_grid(run_grid(cfg)));
    std::ofstream csv(out_path(cfg, "trace.csv"));
    csv << "xi,omega,c,d\n";
    char buf[128];
    for (const CurveSample& s : cv.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.xi, s.omega, s.c, s.d);
        csv << buf;
    }
    out << cv.samples.size() << " samples, omega(x_j) = " << cv.back().omega << ", c(x_j) = " << cv.back().c << '\n';
    return kExitOk;
}

int cmd_apply(const RunConfig& cfg, std::ostream& out) {
    const Loaded problem = load(cfg);
    const ProblemSpec spec(problem.data);
    const Grid grid = run_grid(cfg);
    const Discretization disc(spec, grid, {4, cfg.threads});
    GridFunction result(grid, spec.n());
    if (cfg.part == "f") {
        result = disc.apply_F();
    } else {
        if (cfg.exact.empty()) throw ValidationError("--exact: an input function is required for this part");
        const GridFunction u = sample(parse_list(cfg.exact, "--exact"), grid);
        if (u.components() != spec.n()) throw ValidationError("--exact: expected one expression per component");
        OperatorMask mask;
        if (cfg.part == "r") mask = OperatorMask::only_r();
        else if (cfg.part == "b") mask = OperatorMask::only_b();
        else if (cfg.part == "g") mask = OperatorMask::only_g();
        else if (cfg.part == "h") mask = OperatorMask::only_h();
        else if (cfg.part != "k") throw ValidationError("--part must be one of r, b, g, h, k, f");
        result = disc.apply(u, mask);
    }
    write_grid_csv(cfg, "apply.csv", result);
    out << "sup norm " << sup_norm(result) << '\n';
    return kExitOk;
}

void add_problem_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--problem", cfg.problem, "problem JSON file");
    sub->add_option("--builtin", cfg.builtin, "built-in problem name");
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output directory");
}

void add_grid_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--nx", cfg.nx, "x nodes including both ends (>= 3)");
    sub->add_option("--nt", cfg.nt, "t nodes per period (>= 4)");
}

void add_solver_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--tau", cfg.tau, "kernel tolerance (default 100 N eps sigma_1)");
    sub->add_option("--full-svd-limit", cfg.full_svd_limit, "largest N for the full singular spectrum");
    sub->add_flag("--timings", cfg.timings, "include wall-clock timings in the report");
}

} // namespace

std::vector<Grid> parse_grids(std::string_view spec) {
    std::vector<Grid> grids;
    std::stringstream ss{std::string(spec)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        int nx = 0;
        int nt = 0;
        char sep = 0;
        std::istringstream is(item);
        if (!(is >> nx >> sep >> nt) || (sep != 'x' && sep != 'X') || !(is >> std::ws).eof()) {
            throw RangeError("malformed grid '" + item + "' (expected NXxNT, e.g. 33x32)");
        }
        grids.emplace_back(nx, nt);
    }
    if (grids.empty()) throw RangeError("no grids given");
    return grids;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-periodic integro-differential hyperbolic systems: solve, spectra, resonance checks"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* solve = app.add_subcommand("solve", "assemble I - K and apply the Fredholm alternative");
    auto* spectrum = app.add_subcommand("spectrum", "singular values of I - K");
    auto* kernel = app.add_subcommand("kernel", "numerical kernel basis of I - K");
    auto* levy = app.add_subcommand("check-levy", "screen couplings against the speed gaps");
    auto* converge = app.add_subcommand("converge", "error (or sigma_min) across refining grids");
    auto* resid = app.add_subcommand("residual", "integral-form residual of a candidate solution across grids");
    auto* list = app.add_subcommand("list-builtins", "list the built-in problems");
    auto* tracecmd = app.add_subcommand("trace", "dump one characteristic curve");
    auto* applycmd = app.add_subcommand("apply", "apply one part of the discrete operator");

    for (auto* sub : {solve, spectrum, kernel}) {
        add_problem_options(sub, cfg);
        add_grid_options(sub, cfg);
        add_solver_options(sub, cfg);
    }
    add_problem_options(levy, cfg);
    add_grid_options(levy, cfg);
    levy->add_option("--delta", cfg.delta, "smallest speed gap entering the bound");
    levy->add_option("--tol", cfg.tol, "absolute slack");
    for (auto* sub : {converge, resid}) {
        add_problem_options(sub, cfg);
        sub->add_option("--grids", cfg.grids, "comma-separated NXxNT list");
        sub->add_option("--exact", cfg.exact, "comma-separated expressions, one per component");
        sub->add_option("--full-svd-limit", cfg.full_svd_limit, "largest N for the full singular spectrum");
    }
    converge->add_flag("--sigma", cfg.sigma_trend, "report the sigma_min trend even if an exact solution is known");
    add_problem_options(tracecmd, cfg);
    add_grid_options(tracecmd, cfg);
    tracecmd->add_option("--component", cfg.component, "component, 1-based");
    tracecmd->add_option("--x", cfg.x, "start abscissa");
    tracecmd->add_option("--t", cfg.t, "start time");
    add_problem_options(applycmd, cfg);
    add_grid_options(applycmd, cfg);
    applycmd->add_option("--part", cfg.part, "r, b, g, h, k (all) or f (forcing)");
    applycmd->add_option("--exact", cfg.exact, "input function, one expression per component");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (cfg.tau && !(*cfg.tau > 0.0)) throw RangeError("--tau must be positive");
        if (*solve) return cmd_solve(cfg, out);
        if (*spectrum) return cmd_spectrum(cfg, out);
        if (*kernel) return cmd_kernel(cfg, out);
        if (*levy) return cmd_check_levy(cfg, out);
        if (*converge) return cmd_converge(cfg, out);
        if (*resid) return cmd_residual(cfg, out);
        if (*list) return cmd_list(out);
        if (*tracecmd) return cmd_trace(cfg, out);
        if (*applycmd) return cmd_apply(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

} // namespace hypfred
