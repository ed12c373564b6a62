#pragma once

#include "desinc/solver.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace desinc::cli {

enum ExitCode : int { ok = 0, not_converged = 1, invalid_config = 2 };

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string problem = "example1";
    std::vector<int> n_list{64};
    Method method = Method::gauss_seidel;
    double tol = 1e-14;
    int max_sweeps = 50;
    std::optional<double> h;
    std::string output;      // empty or "-" means stdout
    std::string plot_script; // optional gnuplot script next to the CSV
};

/// Throws ConfigError on an empty N list, N < 2, tol < 0, max_sweeps < 1 or h <= 0.
void validate(const RunConfig& cfg);

/// Applies the keys of a JSON object (problem, n, method, tol, max_sweeps,
/// h, out, plot_script) on top of cfg. Unknown keys are rejected.
void apply_json(RunConfig& cfg, const std::string& json_text);

std::vector<int> parse_n_list(const std::string& text);
Method parse_method(const std::string& text);

/// CSV: N,h,E1,sweeps,converged
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// CSV: nu,E2,z_norm for a single N, E2 measured against ten Gauss-Seidel sweeps.
int cmd_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// CSV: the analysis row plus cond_iii_ok,cond_lbound_ok for every N.
int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// CSV: the full weight matrix for a single N, header w_<j> per node.
int cmd_dump_weights(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line: subcommand plus flags. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace desinc::cli
