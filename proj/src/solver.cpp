#include "desinc/solver.hpp"

#include <cmath>
#include <exception>
#include <utility>

namespace desinc {

RhsEvaluationError::RhsEvaluationError(std::size_t node, const std::string& what)
    : std::runtime_error("rhs evaluation failed at node index " + std::to_string(node) + ": " + what),
      node_(node)
{
}

NotConverged::NotConverged(SolveResult result)
    : std::runtime_error("iteration did not reach tolerance in " + std::to_string(result.sweeps()) +
                         " sweeps"),
      result_(std::move(result))
{
}

namespace {

Vector call_rhs(const IVProblem& prob, double t, const Vector& x, std::size_t node)
{
    Vector fx;
    try {
        fx = prob.rhs(t, x);
    } catch (const std::exception& ex) {
        throw RhsEvaluationError(node, ex.what());
    }
    if (fx.size() != prob.dimension())
        throw RhsEvaluationError(node, "returned vector of size " + std::to_string(fx.size()) +
                                           ", expected " + std::to_string(prob.dimension()));
    if (!fx.allFinite())
        throw RhsEvaluationError(node, "non-finite value");
    return fx;
}

void check_shape(const IVProblem& prob, const WeightMatrix& wm, const NodeValues& x)
{
    if (x.rows() != wm.order() || x.cols() != prob.dimension())
        throw std::invalid_argument("node values do not match grid size and problem dimension");
}

} // namespace

NodeValues initial_values(const IVProblem& prob, const DEGrid& grid)
{
    NodeValues x(static_cast<Eigen::Index>(grid.size()), prob.dimension());
    x.rowwise() = prob.x_a.transpose();
    return x;
}

NodeValues evaluate_rhs(const IVProblem& prob, const DEGrid& grid, const NodeValues& x)
{
    const auto t = grid.t();
    NodeValues f(x.rows(), x.cols());
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        const auto idx = static_cast<std::size_t>(k);
        f.row(k) = call_rhs(prob, t[idx], x.row(k).transpose(), idx).transpose();
    }
    return f;
}

NodeValues jacobi_sweep(const IVProblem& prob, const WeightMatrix& wm, const NodeValues& cur)
{
    check_shape(prob, wm, cur);
    const NodeValues f = evaluate_rhs(prob, wm.grid, cur);
    NodeValues next = wm.w * f;
    next.rowwise() += prob.x_a.transpose();
    return next;
}

void gauss_seidel_sweep(const IVProblem& prob, const WeightMatrix& wm, NodeValues& state,
                        NodeValues& f_cache)
{
    check_shape(prob, wm, state);
    check_shape(prob, wm, f_cache);
    const auto t = wm.grid.t();
    for (Eigen::Index i = 0; i < state.rows(); ++i) {
        // Rows j < i of f_cache already hold f at the new values.
        state.row(i) = prob.x_a.transpose() + wm.w.row(i) * f_cache;
        const auto idx = static_cast<std::size_t>(i);
        f_cache.row(i) = call_rhs(prob, t[idx], state.row(i).transpose(), idx).transpose();
    }
}

void gauss_seidel_sweep(const IVProblem& prob, const WeightMatrix& wm, NodeValues& state)
{
    NodeValues f_cache = evaluate_rhs(prob, wm.grid, state);
    gauss_seidel_sweep(prob, wm, state, f_cache);
}

SolveResult iterate(const IVProblem& prob, const WeightMatrix& wm, const SolveOptions& opts)
{
    if (!(opts.tol >= 0.0))
        throw std::invalid_argument("solve: tol must be non-negative");
    if (opts.max_sweeps < 1)
        throw std::invalid_argument("solve: max_sweeps must be at least 1");
    if (prob.dimension() < 1)
        throw std::invalid_argument("solve: problem dimension must be positive");

    SolveResult result{SincSolution{wm.grid, {}, {}, prob.x_a}, {}, false};
    IterationTrace& trace = result.trace;

    NodeValues x = initial_values(prob, wm.grid);
    NodeValues f = evaluate_rhs(prob, wm.grid, x);
    if (opts.keep_iterates)
        trace.iterates.push_back(x);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        NodeValues prev = x;
        if (opts.method == Method::gauss_seidel) {
            gauss_seidel_sweep(prob, wm, x, f);
        } else {
            x = wm.w * f;
            x.rowwise() += prob.x_a.transpose();
            f = evaluate_rhs(prob, wm.grid, x);
        }
        const double z = (x - prev).cwiseAbs().maxCoeff();
        trace.z_norms.push_back(z);
        if (opts.keep_iterates)
            trace.iterates.push_back(x);
        if (z < opts.tol) {
            result.converged = true;
            break;
        }
    }

    result.solution.x_nodes = std::move(x);
    result.solution.f_nodes = std::move(f);
    return result;
}

SolveResult solve(const IVProblem& prob, const WeightMatrix& wm, const SolveOptions& opts)
{
    SolveResult result = iterate(prob, wm, opts);
    if (!result.converged && opts.tol > 0.0)
        throw NotConverged(std::move(result));
    return result;
}

SolveResult solve(const IVProblem& prob, const DEGrid& grid, const SolveOptions& opts)
{
    return solve(prob, build_weights(grid), opts);
}

SincSolution reference_solution(const IVProblem& prob, const WeightMatrix& wm)
{
    SolveOptions opts;
    opts.method = Method::gauss_seidel;
    opts.tol = 0.0;
    opts.max_sweeps = 10;
    return iterate(prob, wm, opts).solution;
}

SincSolution reference_solution(const IVProblem& prob, const DEGrid& grid)
{
    return reference_solution(prob, build_weights(grid));
}

double collocation_residual(const IVProblem& prob, const WeightMatrix& wm, const NodeValues& x)
{
    check_shape(prob, wm, x);
    NodeValues r = x - wm.w * evaluate_rhs(prob, wm.grid, x);
    r.rowwise() -= prob.x_a.transpose();
    return r.cwiseAbs().maxCoeff();
}

Vector evaluate_at_s(const SincSolution& sol, double s)
{
    const DEGrid& grid = sol.grid;
    const auto dphi = grid.dphi();
    Vector x = sol.x_a;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (dphi[k] == 0.0)
            continue;
        const double coeff = dphi[k] * j_kernel(grid.node(k), grid.step(), s);
        x += coeff * sol.f_nodes.row(static_cast<Eigen::Index>(k)).transpose();
    }
    return x;
}

Vector evaluate(const SincSolution& sol, double t)
{
    if (!sol.grid.interval().contains(t))
        throw std::domain_error("evaluate: t outside [a, b]");
    return evaluate_at_s(sol, phi_de_inv(t, sol.grid.interval()));
}

} // namespace desinc
