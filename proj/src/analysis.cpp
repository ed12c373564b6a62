#include "desinc/analysis.hpp"
#include "desinc/format.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace desinc {

double mgs_norm_exact(const TriangularSplit& parts, double lipschitz)
{
    if (!(lipschitz > 0.0))
        throw std::invalid_argument("mgs_norm_exact: L must be positive");
    const Eigen::Index m = parts.order();
    if (m == 0)
        return 0.0;

    const Matrix lower = lipschitz * parts.e.cwiseAbs();
    Matrix y = lipschitz * parts.f.cwiseAbs();
    y.diagonal() += lipschitz * parts.d.cwiseAbs();

    // (I - L|E|) Y = L(|D| + |F|), row i only needs rows j < i of Y.
    for (Eigen::Index i = 1; i < m; ++i)
        y.row(i) += lower.row(i).head(i) * y.topRows(i);
    return row_sum_norm(y);
}

double e_norm_bound(const Interval& iv) { return 1.1 * iv.length(); }

double df_norm_bound(const Interval& iv, double step, int half_count)
{
    constexpr double pi = std::numbers::pi;
    return iv.length() * step * (pi / 8.0 + (1.0 + std::log(2.0 * half_count)) / (4.0 * pi));
}

double mgs_bound(double lipschitz, const Interval& iv, double step, int half_count)
{
    if (!(lipschitz > 0.0))
        throw std::invalid_argument("mgs_bound: L must be positive");
    if (!(step > 0.0))
        throw std::invalid_argument("mgs_bound: h must be positive");
    if (half_count < 2)
        throw std::invalid_argument("mgs_bound: N must be at least 2");
    const double scaled = lipschitz * iv.length();
    if (!(1.1 * scaled < 1.0))
        throw std::domain_error("mgs_bound: requires 1.1 L (b - a) < 1");
    return lipschitz * df_norm_bound(iv, step, half_count) / (1.0 - 1.1 * scaled);
}

GSAnalysis analyze(const WeightMatrix& wm, double lipschitz)
{
    const DEGrid& grid = wm.grid;
    const TriangularSplit parts = split(wm);

    GSAnalysis out;
    out.half_count = grid.half_count();
    out.step = grid.step();
    out.lipschitz = lipschitz;
    out.length = grid.interval().length();
    out.e_norm = row_sum_norm(parts.e);
    Matrix df = parts.f;
    df.diagonal() += parts.d;
    out.df_norm = row_sum_norm(df);
    out.w = row_sum_norm(wm.w);
    out.mgs_norm = mgs_norm_exact(parts, lipschitz);
    if (1.1 * lipschitz * out.length < 1.0)
        out.mgs_bound = mgs_bound(lipschitz, grid.interval(), grid.step(), grid.half_count());
    out.contraction = out.mgs_norm < 1.0;
    return out;
}

AssumptionReport check_assumptions(const IVProblem& prob, const WeightMatrix& wm)
{
    AssumptionReport report;
    report.w = row_sum_norm(wm.w);

    std::ostringstream msg;
    if (!prob.lipschitz || !prob.bound_m || !prob.rho) {
        msg << "incomplete: missing";
        if (!prob.lipschitz)
            msg << " L";
        if (!prob.bound_m)
            msg << " M";
        if (!prob.rho)
            msg << " rho";
    }
    report.complete = prob.lipschitz && prob.bound_m && prob.rho;

    if (prob.bound_m && prob.rho) {
        // w is a sum of 2N + 1 rounded terms; allow that much rounding.
        const double slack = 1.0 + static_cast<double>(wm.order()) *
                                       std::numeric_limits<double>::epsilon();
        const double limit = *prob.rho / *prob.bound_m;
        report.cond_iii_ok = report.w <= limit * slack;
        if (!msg.str().empty())
            msg << "; ";
        msg << "w = " << format_double(report.w) << (report.cond_iii_ok ? " <= " : " > ")
            << "rho/M = " << format_double(limit);
    }
    if (prob.lipschitz) {
        const double scaled = 1.1 * *prob.lipschitz * prob.iv.length();
        report.cond_lbound_ok = scaled < 1.0;
        if (!msg.str().empty())
            msg << "; ";
        msg << "1.1 L (b - a) = " << format_double(scaled) << (report.cond_lbound_ok ? " < 1" : " >= 1");
    }
    report.details = msg.str();
    return report;
}

double convergence_factor_observed(const IterationTrace& trace)
{
    const auto& z = trace.z_norms;
    if (z.size() < 3)
        throw std::invalid_argument("convergence_factor_observed: need at least three z-norms");
    const double floor = 1e2 * std::numeric_limits<double>::epsilon() * z.front();

    double log_sum = 0.0;
    int count = 0;
    for (std::size_t k = 0; k + 1 < z.size(); ++k) {
        if (z[k] <= floor || z[k + 1] <= floor)
            break;
        log_sum += std::log(z[k + 1] / z[k]);
        ++count;
    }
    if (count < 2)
        throw std::invalid_argument("convergence_factor_observed: fewer than two ratios above roundoff");
    return std::exp(log_sum / count);
}

std::string analysis_csv_header()
{
    return "N,h,L,b_minus_a,e_norm,df_norm,w,mgs_norm,mgs_bound,contraction";
}

std::string analysis_csv_row(const GSAnalysis& a)
{
    std::string row = std::to_string(a.half_count);
    for (double v : {a.step, a.lipschitz, a.length, a.e_norm, a.df_norm, a.w, a.mgs_norm})
        row += "," + format_double(v);
    row += ",";
    if (a.mgs_bound)
        row += format_double(*a.mgs_bound);
    row += a.contraction ? ",1" : ",0";
    return row;
}

} // namespace desinc
