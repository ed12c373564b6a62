#pragma once

#include "desinc/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace desinc {

/// Comparison-matrix analysis of the Gauss-Seidel sweep for a given
/// Lipschitz constant. mgs_bound is empty when 1.1 L (b - a) >= 1.
struct GSAnalysis {
    int half_count = 0;
    double step = 0.0;
    double lipschitz = 0.0;
    double length = 0.0;
    double e_norm = 0.0;
    double df_norm = 0.0;
    double w = 0.0;
    double mgs_norm = 0.0;
    std::optional<double> mgs_bound;
    bool contraction = false;
};

struct AssumptionReport {
    bool complete = false;
    bool cond_iii_ok = false;    // w <= rho / M
    bool cond_lbound_ok = false; // 1.1 L (b - a) < 1
    double w = 0.0;
    std::string details;
};

/// |(I - L|E|)^{-1} L(|D| + |F|)|_inf, exact up to rounding: the unit lower
/// triangular system is solved by forward substitution.
double mgs_norm_exact(const TriangularSplit& parts, double lipschitz);

/// L (b-a) h / (1 - 1.1 L (b-a)) * (pi/8 + (1 + log 2N) / (4 pi)).
/// Throws std::domain_error when 1.1 L (b - a) >= 1.
double mgs_bound(double lipschitz, const Interval& iv, double step, int half_count);

/// 1.1 (b - a)
double e_norm_bound(const Interval& iv);

/// (b - a) h (pi/8 + (1 + log 2N) / (4 pi))
double df_norm_bound(const Interval& iv, double step, int half_count);

GSAnalysis analyze(const WeightMatrix& wm, double lipschitz);

/// Reports on Assumption (iii) and the 1.1 L (b - a) < 1 hypothesis.
/// Missing constants leave complete = false; never throws.
AssumptionReport check_assumptions(const IVProblem& prob, const WeightMatrix& wm);

/// Geometric mean of successive z-norm ratios, ignoring ratios once the
/// norms have dropped to roundoff (below 100 eps times the first norm).
/// Throws std::invalid_argument for fewer than three usable norms.
double convergence_factor_observed(const IterationTrace& trace);

/// "N,h,L,b_minus_a,e_norm,df_norm,w,mgs_norm,mgs_bound,contraction"
std::string analysis_csv_header();
std::string analysis_csv_row(const GSAnalysis& a);

} // namespace desinc
