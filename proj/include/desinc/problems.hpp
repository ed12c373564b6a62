#pragma once

// Test problems with closed-form solutions, and the Toda lattice machinery
// used to manufacture exact Lotka-Volterra solutions.

#include "desinc/solver.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace desinc {

struct TestProblem {
    IVProblem problem;
    std::function<Vector(double)> exact;
    std::string name;
};

/// dx/dt = x on [0, 1/2], x(0) = 1. L = 1, M = 2, rho = 1.
TestProblem example1();

/// Semi-discrete heat equation dx/dt = tridiag(1, -2, 1) x on [0, 1/8] with a
/// unit spike in the middle component. n must be odd and >= 3. L = 4, M = 6, rho = 1.
TestProblem example2(int n);

/// Three-species Lotka-Volterra system on [0, 1], x(0) = (2, 1/2, 3/2).
TestProblem example3();

/// dx/dt = 0 on iv with x_a = (1, 2, ..., n).
TestProblem zero_problem(int n, Interval iv = Interval(0.0, 1.0));

// --- Toda lattice --------------------------------------------------------

/// q has m entries, e has m - 1.
struct TodaState {
    Vector q;
    Vector e;

    int size() const { return static_cast<int>(q.size()); }
};

/// Tridiagonal Lax matrix: q on the diagonal, 1 above, e below.
Matrix lax_matrix(const TodaState& s);

/// Strictly lower part of the Lax matrix.
Matrix lax_lower(const TodaState& s);

/// Reads q from the diagonal and e from the subdiagonal.
TodaState toda_from_lax(const Matrix& a);

/// Right-hand side of the Toda equations: q_k' = e_k - e_{k-1},
/// e_k' = e_k (q_{k+1} - q_k), with e_0 = e_m = 0.
TodaState toda_derivative(const TodaState& s);

/// Max absolute mismatch between the commutator [A, A_-] and the Toda
/// derivative placed on the diagonal and subdiagonal (zero elsewhere).
double toda_rhs_check(const TodaState& s);

class ZeroPivotError : public std::runtime_error {
public:
    ZeroPivotError(Eigen::Index index, const std::string& where);
    Eigen::Index index() const { return index_; }

private:
    Eigen::Index index_;
};

struct LRFactors {
    Matrix lower; // unit lower triangular
    Matrix upper; // upper triangular
};

/// Doolittle elimination without pivoting. Throws ZeroPivotError when a
/// pivot is zero relative to the size of the matrix.
LRFactors lr_decompose(const Matrix& m);

/// exp(t a) by scaling and squaring with a Pade approximant.
Matrix matrix_exp(const Matrix& a, double t);

/// Toda state at time t: A(t) = L_t^{-1} A(0) L_t where exp(t A(0)) = L_t R_t.
TodaState toda_solve(const TodaState& s0, double t);

/// Closed form for m = 2 with q_1 = q_2 = c and e_1 = eps > 0.
TodaState toda_solve_equal_pair(double c, double eps, double t);

// --- Miura map and Lotka-Volterra ----------------------------------------

class MiuraError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Lotka-Volterra variables x_1..x_{2m-1} with q_k = 1 + x_{2k-2} + x_{2k-1},
/// e_k = x_{2k-1} x_{2k}. Throws MiuraError when some x_{2k-1} is too close to 0.
Vector miura_to_lv(const TodaState& s);

/// Inverse direction: the Toda state of an odd-length LV vector.
TodaState lv_to_toda(const Vector& x);

/// dx_k/dt = x_k (x_{k+1} - x_{k-1}), x_0 = x_{2m} = 0.
Vector lv_rhs(const Vector& x);

/// Exact LV solution at time t for the initial data given by s0.
Vector lv_exact(const TodaState& s0, double t);

/// LV problem on iv whose initial value is miura_to_lv(s0).
TestProblem lotka_volterra(const TodaState& s0, Interval iv = Interval(0.0, 1.0));

/// Toda state whose LV image has entries drawn uniformly from [0.5, 1.5].
TodaState random_lv_toda_state(int m, std::uint64_t seed);

/// Problem by name: "example1", "example2:n=11", "example3",
/// "lv:m=3:seed=7", "zero:n=2". Throws std::invalid_argument.
TestProblem make_problem(const std::string& spec);

} // namespace desinc
