#pragma once

#include "desinc/weights.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace desinc {

/// Right-hand side f(t, x) of dx/dt = f(t, x); must return a vector of size n.
using RhsFunction = std::function<Vector(double t, const Vector& x)>;

/// Node values, one row per collocation node (row k is node j = k - N),
/// one column per state component.
using NodeValues = Matrix;

/// dx/dt = rhs(t, x) on iv with x(a) = x_a. The optional constants are the
/// Lipschitz constant L, the bound M on |f|_inf and the radius rho of the
/// ball around x_a on which both hold.
struct IVProblem {
    RhsFunction rhs;
    Vector x_a;
    Interval iv;
    std::optional<double> lipschitz;
    std::optional<double> bound_m;
    std::optional<double> rho;

    Eigen::Index dimension() const { return x_a.size(); }
};

enum class Method { jacobi, gauss_seidel };

struct SolveOptions {
    Method method = Method::gauss_seidel;
    /// Stop once max_i |x_i^(v) - x_i^(v-1)|_inf < tol. tol = 0 runs exactly max_sweeps.
    double tol = 1e-14;
    int max_sweeps = 50;
    /// Record every iterate in the trace; memory is O(max_sweeps * N * n).
    bool keep_iterates = false;
};

/// iterates[v] is x^(v) (iterates[0] is the initial guess), kept only when
/// requested. z_norms[k] = max_i |x_i^(k+1) - x_i^(k)|_inf, always kept.
struct IterationTrace {
    std::vector<NodeValues> iterates;
    std::vector<double> z_norms;
};

/// Node values of the collocation solution together with f at those
/// values, which is all that is needed to evaluate the approximation
/// anywhere in [a, b].
struct SincSolution {
    DEGrid grid;
    NodeValues x_nodes;
    NodeValues f_nodes;
    Vector x_a;
};

struct SolveResult {
    SincSolution solution;
    IterationTrace trace;
    bool converged = false;

    int sweeps() const { return static_cast<int>(trace.z_norms.size()); }
};

/// The right-hand side threw, returned the wrong size or a non-finite value.
class RhsEvaluationError : public std::runtime_error {
public:
    RhsEvaluationError(std::size_t node, const std::string& what);
    std::size_t node() const { return node_; }

private:
    std::size_t node_;
};

/// The iteration hit max_sweeps before reaching tol. Holds the full result.
class NotConverged : public std::runtime_error {
public:
    explicit NotConverged(SolveResult result);
    const SolveResult& result() const { return result_; }

private:
    SolveResult result_;
};

/// Every node set to x_a.
NodeValues initial_values(const IVProblem& prob, const DEGrid& grid);

/// f(t_k, x_k) for every node.
NodeValues evaluate_rhs(const IVProblem& prob, const DEGrid& grid, const NodeValues& x);

/// x_i <- x_a + sum_j w_ij f(t_j, cur_j), all from cur.
NodeValues jacobi_sweep(const IVProblem& prob, const WeightMatrix& wm, const NodeValues& cur);

/// In-place sweep in ascending node order: node i sees the updated values of
/// nodes j < i and the previous values of nodes j >= i. f_cache must hold
/// f at the current state on entry and holds f at the new state on exit.
void gauss_seidel_sweep(const IVProblem& prob, const WeightMatrix& wm, NodeValues& state,
                        NodeValues& f_cache);

/// Same sweep, computing the f-values of the incoming state first.
void gauss_seidel_sweep(const IVProblem& prob, const WeightMatrix& wm, NodeValues& state);

/// Sweeps from x^(0) = x_a until the stopping rule or max_sweeps. Never throws
/// NotConverged; check result.converged.
SolveResult iterate(const IVProblem& prob, const WeightMatrix& wm, const SolveOptions& opts);

/// iterate(), throwing NotConverged when tol > 0 is not reached.
SolveResult solve(const IVProblem& prob, const WeightMatrix& wm, const SolveOptions& opts);
SolveResult solve(const IVProblem& prob, const DEGrid& grid, const SolveOptions& opts);

/// Ten Gauss-Seidel sweeps with no early exit.
SincSolution reference_solution(const IVProblem& prob, const WeightMatrix& wm);
SincSolution reference_solution(const IVProblem& prob, const DEGrid& grid);

/// max_i |x_i - x_a - sum_j w_ij f(t_j, x_j)|_inf
double collocation_residual(const IVProblem& prob, const WeightMatrix& wm, const NodeValues& x);

/// Continuous approximation x~(t) for t in [a, b]; throws std::domain_error otherwise.
Vector evaluate(const SincSolution& sol, double t);

/// x~ at the transformed coordinate s, i.e. x~(phi_de(s)).
Vector evaluate_at_s(const SincSolution& sol, double s);

} // namespace desinc
