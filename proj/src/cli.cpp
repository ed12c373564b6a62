#include "desinc/cli.hpp"

#include "desinc/analysis.hpp"
#include "desinc/format.hpp"
#include "desinc/problems.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace desinc::cli {

void validate(const RunConfig& cfg)
{
    if (cfg.n_list.empty())
        throw ConfigError("N list is empty");
    for (int n : cfg.n_list)
        if (n < 2)
            throw ConfigError("every N must be at least 2 (got " + std::to_string(n) + ")");
    if (!(cfg.tol >= 0.0))
        throw ConfigError("tol must be non-negative");
    if (cfg.max_sweeps < 1)
        throw ConfigError("max_sweeps must be at least 1");
    if (cfg.h && !(*cfg.h > 0.0 && std::isfinite(*cfg.h)))
        throw ConfigError("h must be positive");
}

std::vector<int> parse_n_list(const std::string& text)
{
    std::vector<int> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw ConfigError("bad N value '" + item + "'");
        values.push_back(v);
    }
    if (values.empty())
        throw ConfigError("N list is empty");
    return values;
}

Method parse_method(const std::string& text)
{
    if (text == "gauss_seidel" || text == "gs")
        return Method::gauss_seidel;
    if (text == "jacobi")
        return Method::jacobi;
    throw ConfigError("unknown method '" + text + "' (expected jacobi or gauss_seidel)");
}

void apply_json(RunConfig& cfg, const std::string& json_text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "problem") {
                cfg.problem = value.get<std::string>();
            } else if (key == "n") {
                if (value.is_array())
                    cfg.n_list = value.get<std::vector<int>>();
                else if (value.is_string())
                    cfg.n_list = parse_n_list(value.get<std::string>());
                else
                    cfg.n_list = {value.get<int>()};
            } else if (key == "method") {
                cfg.method = parse_method(value.get<std::string>());
            } else if (key == "tol") {
                cfg.tol = value.get<double>();
            } else if (key == "max_sweeps") {
                cfg.max_sweeps = value.get<int>();
            } else if (key == "h") {
                if (value.is_null())
                    cfg.h.reset();
                else
                    cfg.h = value.get<double>();
            } else if (key == "out") {
                cfg.output = value.get<std::string>();
            } else if (key == "plot_script") {
                cfg.plot_script = value.get<std::string>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::type_error& ex) {
        throw ConfigError(std::string("config has a value of the wrong type: ") + ex.what());
    }
}

namespace {

DEGrid grid_for(const RunConfig& cfg, const TestProblem& tp, int n)
{
    return build_grid(tp.problem.iv, n, cfg.h);
}

double node_error(const SincSolution& sol, const std::function<Vector(double)>& exact)
{
    const auto t = sol.grid.t();
    double err = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Vector diff = sol.x_nodes.row(static_cast<Eigen::Index>(k)).transpose() - exact(t[k]);
        err = std::max(err, diff.cwiseAbs().maxCoeff());
    }
    return err;
}

std::vector<int> sorted_unique(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

int single_n(const RunConfig& cfg, const char* command)
{
    if (cfg.n_list.size() != 1)
        throw ConfigError(std::string(command) + " takes exactly one N");
    return cfg.n_list.front();
}

SolveOptions options_for(const RunConfig& cfg, bool keep_iterates)
{
    SolveOptions opts;
    opts.method = cfg.method;
    opts.tol = cfg.tol;
    opts.max_sweeps = cfg.max_sweeps;
    opts.keep_iterates = keep_iterates;
    return opts;
}

// Wraps a command body with the exit-code policy.
template <typename Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const ConfigError& ex) {
        err << "error: " << ex.what() << '\n';
        return invalid_config;
    } catch (const RhsEvaluationError& ex) {
        err << "error: " << ex.what() << '\n';
        return not_converged;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << '\n';
        return invalid_config;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return not_converged;
    }
}

} // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        validate(cfg);
        const TestProblem tp = make_problem(cfg.problem);
        out << "N,h,E1,sweeps,converged\n";
        int status = ok;
        for (int n : sorted_unique(cfg.n_list)) {
            const WeightMatrix wm = build_weights(grid_for(cfg, tp, n));
            const SolveResult res = iterate(tp.problem, wm, options_for(cfg, false));
            const bool converged = res.converged || cfg.tol == 0.0;
            out << n << ',' << format_double(wm.grid.step()) << ','
                << format_double(node_error(res.solution, tp.exact)) << ',' << res.sweeps() << ','
                << (converged ? 1 : 0) << '\n';
            out.flush();
            if (!converged) {
                err << "warning: N=" << n << " did not reach tol " << format_double(cfg.tol) << " in "
                    << res.sweeps() << " sweeps\n";
                status = not_converged;
            }
        }
        return status;
    });
}

int cmd_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        validate(cfg);
        const int n = single_n(cfg, "trace");
        const TestProblem tp = make_problem(cfg.problem);
        const WeightMatrix wm = build_weights(grid_for(cfg, tp, n));
        const SincSolution ref = reference_solution(tp.problem, wm);
        const SolveResult res = iterate(tp.problem, wm, options_for(cfg, true));

        out << "nu,E2,z_norm\n";
        for (std::size_t nu = 1; nu < res.trace.iterates.size(); ++nu) {
            const double e2 = (res.trace.iterates[nu] - ref.x_nodes).cwiseAbs().maxCoeff();
            out << nu << ',' << format_double(e2) << ',' << format_double(res.trace.z_norms[nu - 1])
                << '\n';
        }
        out.flush();
        if (!res.converged && cfg.tol > 0.0) {
            err << "warning: did not reach tol " << format_double(cfg.tol) << " in " << res.sweeps()
                << " sweeps\n";
            return static_cast<int>(not_converged);
        }
        return static_cast<int>(ok);
    });
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        validate(cfg);
        const TestProblem tp = make_problem(cfg.problem);
        if (!tp.problem.lipschitz)
            throw ConfigError("problem " + tp.name + " has no Lipschitz constant");
        out << analysis_csv_header() << ",cond_iii_ok,cond_lbound_ok\n";
        for (int n : sorted_unique(cfg.n_list)) {
            const WeightMatrix wm = build_weights(grid_for(cfg, tp, n));
            const GSAnalysis a = analyze(wm, *tp.problem.lipschitz);
            const AssumptionReport report = check_assumptions(tp.problem, wm);
            out << analysis_csv_row(a) << ',' << (report.cond_iii_ok ? 1 : 0) << ','
                << (report.cond_lbound_ok ? 1 : 0) << '\n';
        }
        return static_cast<int>(ok);
    });
}

int cmd_dump_weights(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        validate(cfg);
        const int n = single_n(cfg, "dump-weights");
        const TestProblem tp = make_problem(cfg.problem);
        const WeightMatrix wm = build_weights(grid_for(cfg, tp, n));
        for (std::size_t k = 0; k < wm.grid.size(); ++k)
            out << (k > 0 ? "," : "") << "w_" << wm.grid.node(k);
        out << '\n';
        write_matrix_csv(out, wm.w);
        return static_cast<int>(ok);
    });
}

namespace {

void write_plot_script(const std::string& command, const RunConfig& cfg, std::ostream& script)
{
    script << "# gnuplot script\n"
           << "set datafile separator ','\n"
           << "set key autotitle columnhead\n"
           << "set logscale y\n"
           << "set format y '%.0e'\n";
    const std::string data = "'" + cfg.output + "'";
    if (command == "solve") {
        script << "set xlabel 'N'\nset ylabel 'E1'\n"
               << "plot " << data << " using 1:3 with linespoints\n";
    } else if (command == "trace") {
        script << "set xlabel 'sweep'\nset ylabel 'E2'\n"
               << "plot " << data << " using 1:2 with linespoints, " << data
               << " using 1:3 with linespoints\n";
    } else if (command == "analyze") {
        script << "set xlabel 'N'\n"
               << "plot " << data << " using 1:8 with linespoints, " << data
               << " using 1:9 with linespoints\n";
    } else {
        script << "unset logscale y\nplot " << data << " matrix with image\n";
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Double-exponential Sinc-collocation solver for initial value problems"};
    app.require_subcommand(1);
    app.fallthrough();
    // -h is free for the step size; help stays on --help.
    app.set_help_flag("--help", "print this help and exit");

    std::string problem, n_text, method, output, config_path, plot_script;
    double tol = 0.0;
    double h = 0.0;
    int max_sweeps = 0;
    auto* o_problem = app.add_option("--problem", problem,
                                     "example1 | example2:n=<odd> | example3 | lv:m=<m>:seed=<s> | zero:n=<n>");
    auto* o_n = app.add_option("--n", n_text, "comma-separated list of N");
    auto* o_method = app.add_option("--method", method, "jacobi | gauss_seidel");
    auto* o_tol = app.add_option("--tol", tol, "stop when the sweep difference drops below tol");
    auto* o_max = app.add_option("--max-sweeps", max_sweeps, "sweep limit");
    auto* o_h = app.add_option("--h", h, "step size (default log(N)/N)");
    auto* o_out = app.add_option("--out", output, "CSV output path (default stdout)");
    auto* o_config = app.add_option("--config", config_path, "JSON config file; flags override it");
    auto* o_plot = app.add_option("--plot-script", plot_script, "write a gnuplot script for the CSV");

    const char* commands[] = {"solve", "trace", "analyze", "dump-weights"};
    const char* descriptions[] = {"solve for each N and report the node error E1",
                                  "per-sweep error against the ten-sweep reference",
                                  "exact |M_GS| and its closed-form bound per N",
                                  "write the collocation weight matrix"};
    for (int i = 0; i < 4; ++i)
        app.add_subcommand(commands[i], descriptions[i]);

    std::vector<std::string> storage{"desinc"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage)
        argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? static_cast<int>(ok) : static_cast<int>(invalid_config);
    }

    RunConfig cfg;
    try {
        if (o_config->count() > 0) {
            std::ifstream in(config_path);
            if (!in)
                throw ConfigError("cannot read config file " + config_path);
            std::stringstream buf;
            buf << in.rdbuf();
            apply_json(cfg, buf.str());
        }
        if (o_problem->count() > 0)
            cfg.problem = problem;
        if (o_n->count() > 0)
            cfg.n_list = parse_n_list(n_text);
        if (o_method->count() > 0)
            cfg.method = parse_method(method);
        if (o_tol->count() > 0)
            cfg.tol = tol;
        if (o_max->count() > 0)
            cfg.max_sweeps = max_sweeps;
        if (o_h->count() > 0)
            cfg.h = h;
        if (o_out->count() > 0)
            cfg.output = output;
        if (o_plot->count() > 0)
            cfg.plot_script = plot_script;
        validate(cfg);
        if (!cfg.plot_script.empty() && (cfg.output.empty() || cfg.output == "-"))
            throw ConfigError("--plot-script needs --out");
    } catch (const ConfigError& ex) {
        err << "error: " << ex.what() << '\n';
        return invalid_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    auto dispatch = [&](std::ostream& sink) {
        if (command == "solve")
            return cmd_solve(cfg, sink, err);
        if (command == "trace")
            return cmd_trace(cfg, sink, err);
        if (command == "analyze")
            return cmd_analyze(cfg, sink, err);
        return cmd_dump_weights(cfg, sink, err);
    };

    int status = ok;
    if (cfg.output.empty() || cfg.output == "-") {
        status = dispatch(out);
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << cfg.output << " for writing\n";
            return invalid_config;
        }
        status = dispatch(file);
    }

    if (!cfg.plot_script.empty()) {
        std::ofstream script(cfg.plot_script, std::ios::binary);
        if (!script) {
            err << "error: cannot open " << cfg.plot_script << " for writing\n";
            return invalid_config;
        }
        write_plot_script(command, cfg, script);
    }
    return status;
}

} // namespace desinc::cli
