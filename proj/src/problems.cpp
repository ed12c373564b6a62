#include "desinc/problems.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace desinc {

TestProblem example1()
{
    IVProblem prob{
        .rhs = [](double, const Vector& x) -> Vector { return x; },
        .x_a = Vector::Ones(1),
        .iv = Interval(0.0, 0.5),
        .lipschitz = 1.0,
        .bound_m = 2.0,
        .rho = 1.0,
    };
    auto exact = [](double t) -> Vector { return Vector::Constant(1, std::exp(t)); };
    return {std::move(prob), exact, "example1"};
}

TestProblem example2(int n)
{
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("example2: n must be odd and at least 3");

    auto rhs = [](double, const Vector& x) -> Vector {
        const Eigen::Index len = x.size();
        Vector y = -2.0 * x;
        y.head(len - 1) += x.tail(len - 1);
        y.tail(len - 1) += x.head(len - 1);
        return y;
    };
    Vector x0 = Vector::Zero(n);
    x0((n + 1) / 2 - 1) = 1.0;

    // Eigen-expansion in the discrete sine basis.
    auto exact = [n](double t) -> Vector {
        constexpr double pi = std::numbers::pi;
        const double np1 = n + 1.0;
        Vector x = Vector::Zero(n);
        for (int l = 1; l <= n; ++l) {
            if (l % 2 == 0)
                continue; // sin(l pi / 2) = 0
            const double spike = l % 4 == 1 ? 1.0 : -1.0;
            const double s = std::sin(l * pi / (2.0 * np1));
            const double decay = std::exp(-4.0 * t * s * s);
            for (int k = 1; k <= n; ++k)
                x(k - 1) += std::sin(k * l * pi / np1) * spike * decay;
        }
        return (2.0 / np1) * x;
    };

    IVProblem prob{
        .rhs = rhs,
        .x_a = x0,
        .iv = Interval(0.0, 0.125),
        .lipschitz = 4.0,
        .bound_m = 6.0,
        .rho = 1.0,
    };
    return {std::move(prob), exact, "example2:n=" + std::to_string(n)};
}

TestProblem example3()
{
    auto rhs = [](double, const Vector& x) -> Vector {
        Vector y(3);
        y << x(0) * x(1), x(1) * (x(2) - x(0)), -x(2) * x(1);
        return y;
    };
    auto exact = [](double t) -> Vector {
        const double c = std::cosh(t);
        const double s = std::sinh(t);
        const double th = std::tanh(t);
        const double x2 = 1.0 / (c * (2.0 * c + s));
        Vector x(3);
        x << 2.0 + th, x2, 2.0 - th - x2;
        return x;
    };
    Vector x0(3);
    x0 << 2.0, 0.5, 1.5;
    // M and L are the sup-norm bounds of f and of its Jacobian over the box
    // |x - x0|_inf <= 1/2.
    IVProblem prob{
        .rhs = rhs,
        .x_a = x0,
        .iv = Interval(0.0, 1.0),
        .lipschitz = 3.5,
        .bound_m = 2.5,
        .rho = 0.5,
    };
    return {std::move(prob), exact, "example3"};
}

TestProblem zero_problem(int n, Interval iv)
{
    if (n < 1)
        throw std::invalid_argument("zero_problem: n must be positive");
    const Vector x0 = Vector::LinSpaced(n, 1.0, static_cast<double>(n));
    IVProblem prob{
        .rhs = [n](double, const Vector&) -> Vector { return Vector::Zero(n); },
        .x_a = x0,
        .iv = iv,
        .lipschitz = std::nullopt,
        .bound_m = std::nullopt,
        .rho = std::nullopt,
    };
    return {std::move(prob), [x0](double) { return x0; }, "zero:n=" + std::to_string(n)};
}

// --- Toda lattice --------------------------------------------------------

namespace {

void check_toda(const TodaState& s)
{
    if (s.q.size() < 1)
        throw std::invalid_argument("TodaState: q must be non-empty");
    if (s.e.size() != s.q.size() - 1)
        throw std::invalid_argument("TodaState: e must have m - 1 entries");
}

} // namespace

Matrix lax_matrix(const TodaState& s)
{
    check_toda(s);
    const Eigen::Index m = s.q.size();
    Matrix a = Matrix::Zero(m, m);
    a.diagonal() = s.q;
    if (m > 1) {
        a.diagonal(1).setOnes();
        a.diagonal(-1) = s.e;
    }
    return a;
}

Matrix lax_lower(const TodaState& s)
{
    check_toda(s);
    const Eigen::Index m = s.q.size();
    Matrix a = Matrix::Zero(m, m);
    if (m > 1)
        a.diagonal(-1) = s.e;
    return a;
}

TodaState toda_from_lax(const Matrix& a)
{
    if (a.rows() != a.cols() || a.rows() < 1)
        throw std::invalid_argument("toda_from_lax: need a non-empty square matrix");
    TodaState s;
    s.q = a.diagonal();
    s.e = a.rows() > 1 ? Vector(a.diagonal(-1)) : Vector(0);
    return s;
}

TodaState toda_derivative(const TodaState& s)
{
    check_toda(s);
    const Eigen::Index m = s.q.size();
    TodaState d{Vector::Zero(m), Vector::Zero(m - 1)};
    for (Eigen::Index k = 0; k < m; ++k) {
        const double ek = k < m - 1 ? s.e(k) : 0.0;
        const double ekm1 = k > 0 ? s.e(k - 1) : 0.0;
        d.q(k) = ek - ekm1;
    }
    for (Eigen::Index k = 0; k < m - 1; ++k)
        d.e(k) = s.e(k) * (s.q(k + 1) - s.q(k));
    return d;
}

double toda_rhs_check(const TodaState& s)
{
    const Matrix a = lax_matrix(s);
    const Matrix lower = lax_lower(s);
    const Matrix comm = a * lower - lower * a;
    const TodaState d = toda_derivative(s);

    Matrix expected = Matrix::Zero(a.rows(), a.cols());
    expected.diagonal() = d.q;
    if (a.rows() > 1)
        expected.diagonal(-1) = d.e;
    return (comm - expected).cwiseAbs().maxCoeff();
}

ZeroPivotError::ZeroPivotError(Eigen::Index index, const std::string& where)
    : std::runtime_error(where + ": zero pivot at index " + std::to_string(index)), index_(index)
{
}

LRFactors lr_decompose(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("lr_decompose: matrix must be square");
    const Eigen::Index n = m.rows();
    const double scale = n > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
    const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * scale;

    Matrix upper = m;
    Matrix lower = Matrix::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double pivot = upper(k, k);
        if (!(std::abs(pivot) > tiny))
            throw ZeroPivotError(k, "lr_decompose");
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double factor = upper(i, k) / pivot;
            lower(i, k) = factor;
            upper.row(i).tail(n - k) -= factor * upper.row(k).tail(n - k);
            upper(i, k) = 0.0;
        }
    }
    return {std::move(lower), std::move(upper)};
}

Matrix matrix_exp(const Matrix& a, double t)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("matrix_exp: matrix must be square");
    const Eigen::MatrixXd scaled = t * a;
    return scaled.exp();
}

TodaState toda_solve(const TodaState& s0, double t)
{
    const Matrix a0 = lax_matrix(s0);
    LRFactors lr;
    try {
        lr = lr_decompose(matrix_exp(a0, t));
    } catch (const ZeroPivotError& err) {
        throw ZeroPivotError(err.index(), "toda_solve: LR decomposition of exp(t A(0))");
    }
    // A(t) = L^{-1} A(0) L
    const Matrix at = lr.lower.triangularView<Eigen::UnitLower>().solve(a0 * lr.lower);
    return toda_from_lax(at);
}

TodaState toda_solve_equal_pair(double c, double eps, double t)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("toda_solve_equal_pair: e_1 must be positive");
    const double r = std::sqrt(eps);
    const double l = r * std::tanh(r * t);
    const double sech = 1.0 / std::cosh(r * t);
    TodaState s{Vector(2), Vector(1)};
    s.q << c + l, c - l;
    s.e << eps * sech * sech;
    return s;
}

// --- Miura map and Lotka-Volterra ----------------------------------------

Vector miura_to_lv(const TodaState& s)
{
    check_toda(s);
    const Eigen::Index m = s.q.size();
    const double threshold = 1e-12 * std::max(1.0, s.q.cwiseAbs().maxCoeff());

    Vector x(2 * m - 1);
    x(0) = s.q(0) - 1.0;
    for (Eigen::Index k = 1; k < m; ++k) {
        // 0-based: x(2k-2) is x_{2k-1}, x(2k-1) is x_{2k}, x(2k) is x_{2k+1}.
        const double odd = x(2 * k - 2);
        if (!(std::abs(odd) > threshold)) {
            std::ostringstream msg;
            msg << "miura_to_lv: x_" << (2 * k - 1) << " = " << odd << " is too close to zero";
            throw MiuraError(msg.str());
        }
        x(2 * k - 1) = s.e(k - 1) / odd;
        x(2 * k) = s.q(k) - x(2 * k - 1) - 1.0;
    }
    return x;
}

TodaState lv_to_toda(const Vector& x)
{
    if (x.size() < 1 || x.size() % 2 == 0)
        throw std::invalid_argument("lv_to_toda: need an odd number of species");
    const Eigen::Index m = (x.size() + 1) / 2;
    TodaState s{Vector(m), Vector(m - 1)};
    for (Eigen::Index k = 0; k < m; ++k) {
        const double prev = k > 0 ? x(2 * k - 1) : 0.0;
        s.q(k) = 1.0 + prev + x(2 * k);
    }
    for (Eigen::Index k = 0; k < m - 1; ++k)
        s.e(k) = x(2 * k) * x(2 * k + 1);
    return s;
}

Vector lv_rhs(const Vector& x)
{
    const Eigen::Index n = x.size();
    Vector y(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double next = k + 1 < n ? x(k + 1) : 0.0;
        const double prev = k > 0 ? x(k - 1) : 0.0;
        y(k) = x(k) * (next - prev);
    }
    return y;
}

Vector lv_exact(const TodaState& s0, double t) { return miura_to_lv(toda_solve(s0, t)); }

TestProblem lotka_volterra(const TodaState& s0, Interval iv)
{
    const Vector x0 = miura_to_lv(s0);
    const double a = iv.a();
    IVProblem prob{
        .rhs = [](double, const Vector& x) -> Vector { return lv_rhs(x); },
        .x_a = x0,
        .iv = iv,
        .lipschitz = std::nullopt,
        .bound_m = std::nullopt,
        .rho = std::nullopt,
    };
    auto exact = [s0, x0, a](double t) -> Vector {
        if (t == a)
            return x0;
        return lv_exact(s0, t - a);
    };
    return {std::move(prob), exact, "lv:m=" + std::to_string(s0.size())};
}

TodaState random_lv_toda_state(int m, std::uint64_t seed)
{
    if (m < 1)
        throw std::invalid_argument("random_lv_toda_state: m must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    Vector x(2 * m - 1);
    for (Eigen::Index k = 0; k < x.size(); ++k)
        x(k) = dist(rng);
    return lv_to_toda(x);
}

namespace {

std::map<std::string, std::string> parse_params(const std::string& spec, std::string& name)
{
    std::map<std::string, std::string> params;
    std::istringstream in(spec);
    std::string token;
    bool first = true;
    while (std::getline(in, token, ':')) {
        if (first) {
            name = token;
            first = false;
            continue;
        }
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("problem parameter '" + token + "' is not key=value");
        params[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return params;
}

long long parse_integer(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw std::invalid_argument("problem parameter " + key + "='" + text + "' is not an integer");
    return value;
}

} // namespace

TestProblem make_problem(const std::string& spec)
{
    std::string name;
    auto params = parse_params(spec, name);
    auto take = [&](const std::string& key, long long fallback) {
        const auto it = params.find(key);
        if (it == params.end())
            return fallback;
        const long long v = parse_integer(key, it->second);
        params.erase(it);
        return v;
    };

    auto build = [&]() -> TestProblem {
        if (name == "example1")
            return example1();
        if (name == "example2")
            return example2(static_cast<int>(take("n", 11)));
        if (name == "example3")
            return example3();
        if (name == "lv") {
            const long long m = take("m", 3);
            const long long seed = take("seed", 1);
            if (m < 1 || m > 1000)
                throw std::invalid_argument("lv: m out of range");
            TestProblem lv = lotka_volterra(
                random_lv_toda_state(static_cast<int>(m), static_cast<std::uint64_t>(seed)));
            lv.name = "lv:m=" + std::to_string(m) + ":seed=" + std::to_string(seed);
            return lv;
        }
        if (name == "zero") {
            const long long n = take("n", 1);
            if (n < 1 || n > 100000)
                throw std::invalid_argument("zero: n out of range");
            return zero_problem(static_cast<int>(n));
        }
        throw std::invalid_argument("unknown problem '" + name + "'");
    };
    TestProblem problem = build();
    if (!params.empty())
        throw std::invalid_argument("unknown parameter '" + params.begin()->first + "' for problem " + name);
    return problem;
}

} // namespace desinc
