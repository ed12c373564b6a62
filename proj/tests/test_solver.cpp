#include "desinc/solver.hpp"
#include "desinc/problems.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace desinc;
using doctest::Approx;

namespace {

std::vector<double> node_times(const DEGrid& g) { return {g.t().begin(), g.t().end()}; }

double max_node_error(const SincSolution& sol, const std::function<Vector(double)>& exact)
{
    double err = 0.0;
    for (std::size_t k = 0; k < sol.grid.size(); ++k)
        err = std::max(err, (sol.x_nodes.row(static_cast<Eigen::Index>(k)).transpose() - exact(sol.grid.t()[k]))
                                .cwiseAbs()
                                .maxCoeff());
    return err;
}

} // namespace

TEST_CASE("zero field: every sweep returns x_a")
{
    const TestProblem tp = zero_problem(3);
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 6));
    NodeValues start = initial_values(tp.problem, wm.grid);
    start.setRandom();

    const NodeValues jac = jacobi_sweep(tp.problem, wm, start);
    NodeValues gs = start;
    gauss_seidel_sweep(tp.problem, wm, gs);
    for (Eigen::Index k = 0; k < jac.rows(); ++k) {
        CHECK((jac.row(k).transpose() - tp.problem.x_a).isZero(0.0));
        CHECK((gs.row(k).transpose() - tp.problem.x_a).isZero(0.0));
    }

    const SolveResult res = solve(tp.problem, wm, SolveOptions{});
    CHECK(res.converged);
    CHECK(res.trace.z_norms == std::vector<double>{0.0});
    for (double t : {0.0, 0.3, 1.0})
        CHECK((evaluate(res.solution, t) - tp.problem.x_a).isZero(0.0));

    const SincSolution ref = reference_solution(tp.problem, wm);
    CHECK((ref.x_nodes.rowwise() - tp.problem.x_a.transpose()).isZero(0.0));
}

TEST_CASE("Jacobi sweep on x' = x from all ones is 1 + row sums")
{
    const TestProblem tp = example1();
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 8));
    const NodeValues next = jacobi_sweep(tp.problem, wm, initial_values(tp.problem, wm.grid));
    for (Eigen::Index i = 0; i < wm.order(); ++i) {
        double sum = 1.0;
        for (Eigen::Index j = 0; j < wm.order(); ++j)
            sum += wm.w(i, j);
        CHECK(next(i, 0) == Approx(sum).epsilon(1e-15));
    }
}

TEST_CASE("Gauss-Seidel sweep equals the literal double sum")
{
    SUBCASE("example 1, N = 2, one sweep")
    {
        const TestProblem tp = example1();
        const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 2));
        NodeValues x = initial_values(tp.problem, wm.grid);
        const NodeValues expected =
            oracle::gs_double_loop(wm.w, node_times(wm.grid), tp.problem.x_a, tp.problem.rhs, x);
        gauss_seidel_sweep(tp.problem, wm, x);
        CHECK((x - expected).cwiseAbs().maxCoeff() <= 1e-15);
    }
    SUBCASE("example 3, N = 6, three sweeps with a persistent cache")
    {
        const TestProblem tp = example3();
        const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 6));
        NodeValues x = initial_values(tp.problem, wm.grid);
        NodeValues f = evaluate_rhs(tp.problem, wm.grid, x);
        NodeValues expected = x;
        for (int sweep = 0; sweep < 3; ++sweep) {
            expected = oracle::gs_double_loop(wm.w, node_times(wm.grid), tp.problem.x_a, tp.problem.rhs, expected);
            gauss_seidel_sweep(tp.problem, wm, x, f);
            CHECK((x - expected).cwiseAbs().maxCoeff() <= 1e-14);
        }
        // The cache tracks f at the current state.
        CHECK((f - evaluate_rhs(tp.problem, wm.grid, x)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("sweep order matters")
{
    const TestProblem tp = example3();
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 4));
    NodeValues forward = initial_values(tp.problem, wm.grid);
    gauss_seidel_sweep(tp.problem, wm, forward);

    // Same sweep with the node order reversed (flip rows and columns of w).
    const Eigen::Index m = wm.order();
    Matrix flipped = wm.w.colwise().reverse().rowwise().reverse();
    std::vector<double> t = node_times(wm.grid);
    std::reverse(t.begin(), t.end());
    const NodeValues backward = oracle::gs_double_loop(flipped, t, tp.problem.x_a, tp.problem.rhs,
                                                       initial_values(tp.problem, wm.grid))
                                    .colwise()
                                    .reverse();
    CHECK(m == 9);
    CHECK((forward - backward).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("Gauss-Seidel minus Jacobi is the lower-triangular coupling (linear field)")
{
    const double lambda = -1.7;
    IVProblem prob{
        .rhs = [lambda](double, const Vector& x) -> Vector { return lambda * x; },
        .x_a = Vector::Constant(1, 0.8),
        .iv = Interval(0.0, 1.0),
    };
    const WeightMatrix wm = build_weights(build_grid(prob.iv, 2));
    NodeValues old = initial_values(prob, wm.grid);
    old(1, 0) = 0.3;
    old(3, 0) = -0.4;
    const NodeValues jac = jacobi_sweep(prob, wm, old);
    NodeValues gs = old;
    gauss_seidel_sweep(prob, wm, gs);

    Matrix lower = wm.w.triangularView<Eigen::StrictlyLower>();
    const NodeValues coupling = lambda * lower * (gs - old);
    CHECK((gs - jac - coupling).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("example 1 converges fast with Gauss-Seidel")
{
    const TestProblem tp = example1();
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 64));
    SolveOptions opts;
    opts.tol = 1e-15;
    const SolveResult gs = solve(tp.problem, wm, opts);
    CHECK(gs.converged);
    const auto& z = gs.trace.z_norms;
    REQUIRE(z.size() >= 5);
    // Roughly two orders of magnitude per sweep before roundoff.
    for (std::size_t k = 1; k + 1 < z.size() && z[k + 1] > 1e-13; ++k)
        CHECK(z[k + 1] / z[k] < 0.05);
    CHECK(max_node_error(gs.solution, tp.exact) < 1e-12);
    CHECK(collocation_residual(tp.problem, wm, gs.solution.x_nodes) < 1e-14);

    opts.method = Method::jacobi;
    const SolveResult jac = solve(tp.problem, wm, opts);
    CHECK(jac.converged);
    CHECK(jac.sweeps() > gs.sweeps());
    CHECK((jac.solution.x_nodes - gs.solution.x_nodes).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("a converged Jacobi fixed point is a fixed point of the sweep")
{
    const TestProblem tp = example3();
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 16));
    SolveOptions opts;
    opts.method = Method::jacobi;
    const SolveResult res = solve(tp.problem, wm, opts);
    const NodeValues again = jacobi_sweep(tp.problem, wm, res.solution.x_nodes);
    CHECK((again - res.solution.x_nodes).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(collocation_residual(tp.problem, wm, res.solution.x_nodes) < 1e-13);
}

TEST_CASE("trace records every iterate on request")
{
    const TestProblem tp = example1();
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 16));
    SolveOptions opts;
    opts.keep_iterates = true;
    const SolveResult res = solve(tp.problem, wm, opts);
    const auto& tr = res.trace;
    REQUIRE(tr.iterates.size() == tr.z_norms.size() + 1);
    CHECK((tr.iterates.front().array() == 1.0).all());
    for (std::size_t k = 0; k < tr.z_norms.size(); ++k)
        CHECK(tr.z_norms[k] == (tr.iterates[k + 1] - tr.iterates[k]).cwiseAbs().maxCoeff());
    CHECK((tr.iterates.back() - res.solution.x_nodes).isZero(0.0));

    opts.keep_iterates = false;
    CHECK(solve(tp.problem, wm, opts).trace.iterates.empty());
}

TEST_CASE("non-convergence carries the trace")
{
    const TestProblem tp = example1();
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 16));
    SolveOptions opts;
    opts.max_sweeps = 3;
    try {
        (void)solve(tp.problem, wm, opts);
        FAIL("expected NotConverged");
    } catch (const NotConverged& ex) {
        CHECK_FALSE(ex.result().converged);
        CHECK(ex.result().sweeps() == 3);
        CHECK(ex.result().trace.z_norms.size() == 3);
    }
    // iterate() reports instead of throwing.
    const SolveResult res = iterate(tp.problem, wm, opts);
    CHECK_FALSE(res.converged);

    opts.tol = 0.0;
    CHECK(solve(tp.problem, wm, opts).sweeps() == 3);
}

TEST_CASE("invalid solve options")
{
    const TestProblem tp = example1();
    const DEGrid g = build_grid(tp.problem.iv, 4);
    SolveOptions opts;
    opts.max_sweeps = 0;
    CHECK_THROWS_AS(solve(tp.problem, g, opts), std::invalid_argument);
    opts.max_sweeps = 5;
    opts.tol = -1.0;
    CHECK_THROWS_AS(solve(tp.problem, g, opts), std::invalid_argument);
}

TEST_CASE("rhs failures name the node")
{
    const Interval iv(0.0, 1.0);
    const DEGrid g = build_grid(iv, 4);
    IVProblem throwing{
        .rhs = [](double t, const Vector& x) -> Vector {
            if (t > 0.6)
                throw std::runtime_error("boom");
            return x;
        },
        .x_a = Vector::Ones(1),
        .iv = iv,
    };
    try {
        (void)solve(throwing, g, SolveOptions{});
        FAIL("expected RhsEvaluationError");
    } catch (const RhsEvaluationError& ex) {
        CHECK(g.t()[ex.node()] > 0.6);
        CHECK(g.t()[ex.node() - 1] <= 0.6);
        CHECK(std::string(ex.what()).find("boom") != std::string::npos);
    }

    IVProblem wrong_size{
        .rhs = [](double, const Vector&) -> Vector { return Vector::Zero(2); },
        .x_a = Vector::Ones(1),
        .iv = iv,
    };
    CHECK_THROWS_AS(solve(wrong_size, g, SolveOptions{}), RhsEvaluationError);

    IVProblem nan_field{
        .rhs = [](double, const Vector&) -> Vector { return Vector::Constant(1, NAN); },
        .x_a = Vector::Ones(1),
        .iv = iv,
    };
    SolveOptions jac;
    jac.method = Method::jacobi;
    CHECK_THROWS_AS(solve(nan_field, g, jac), RhsEvaluationError);
}

TEST_CASE("evaluate reproduces the nodes and the exact solution")
{
    const TestProblem tp = example1();
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 64));
    SolveOptions opts;
    opts.tol = 1e-15;
    const SincSolution sol = solve(tp.problem, wm, opts).solution;

    CHECK(evaluate(sol, 0.25)(0) == Approx(std::exp(0.25)).epsilon(1e-10));
    CHECK(std::abs(evaluate(sol, 0.25)(0) - std::exp(0.25)) < 1e-10);

    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
        const double at_s = evaluate_at_s(sol, sol.grid.s()[k])(0);
        CHECK(std::abs(at_s - sol.x_nodes(static_cast<Eigen::Index>(k), 0)) < 1e-14);
        const double at_t = evaluate(sol, sol.grid.t()[k])(0);
        CHECK(std::abs(at_t - sol.x_nodes(static_cast<Eigen::Index>(k), 0)) < 1e-13);
    }

    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
        const double t = 0.5 * i / 500.0;
        worst = std::max(worst, std::abs(evaluate(sol, t)(0) - std::exp(t)));
    }
    CHECK(worst < 1e-10);

    CHECK_THROWS_AS(evaluate(sol, -1e-3), std::domain_error);
    CHECK_THROWS_AS(evaluate(sol, 0.5001), std::domain_error);
}

TEST_CASE("reference solution protocol")
{
    const TestProblem tp = example1();
    const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 64));
    const SincSolution ref = reference_solution(tp.problem, wm);

    NodeValues x = ref.x_nodes;
    gauss_seidel_sweep(tp.problem, wm, x);
    CHECK((x - ref.x_nodes).cwiseAbs().maxCoeff() < 1e-14);

    SolveOptions opts;
    opts.tol = 1e-15;
    const SincSolution tight = solve(tp.problem, wm, opts).solution;
    CHECK((tight.x_nodes - ref.x_nodes).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("iterates stay in the rho ball when the assumption holds")
{
    for (const TestProblem& tp : {example1(), example2(11)}) {
        const WeightMatrix wm = build_weights(build_grid(tp.problem.iv, 32));
        SolveOptions opts;
        opts.keep_iterates = true;
        opts.tol = 0.0;
        opts.max_sweeps = 12;
        for (Method method : {Method::gauss_seidel, Method::jacobi}) {
            opts.method = method;
            const SolveResult res = solve(tp.problem, wm, opts);
            for (const NodeValues& it : res.trace.iterates)
                CHECK((it.rowwise() - tp.problem.x_a.transpose()).cwiseAbs().maxCoeff() <= *tp.problem.rho);
        }
    }
}

TEST_CASE("z-norm sequence does not depend on the dimension")
{
    SolveOptions opts;
    opts.tol = 0.0;
    opts.max_sweeps = 12;
    const TestProblem small = example2(11);
    const TestProblem large = example2(101);
    const SolveResult a = solve(small.problem, build_grid(small.problem.iv, 32), opts);
    const SolveResult b = solve(large.problem, build_grid(large.problem.iv, 32), opts);
    REQUIRE(a.trace.z_norms.size() == b.trace.z_norms.size());
    for (std::size_t k = 0; k < a.trace.z_norms.size(); ++k)
        CHECK(std::abs(a.trace.z_norms[k] - b.trace.z_norms[k]) <= 1e-12);
}
