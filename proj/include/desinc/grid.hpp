#pragma once

#include "desinc/special.hpp"

#include <optional>
#include <span>
#include <vector>

namespace desinc {

/// DE collocation grid: nodes s_j = j h for j = -N..N, their images
/// t_j = phi_de(s_j) and the derivatives phi_de'(s_j).
///
/// Storage is 0-based: array index k holds node j = k - N, so the centre
/// node j = 0 sits at k = N. All arrays have size() = 2N + 1 entries.
///
/// t is non-decreasing; it is strictly increasing until tanh saturates,
/// after which extreme nodes may coincide with an endpoint in double
/// precision. dphi is positive or has underflowed to 0.
class DEGrid {
public:
    DEGrid(Interval iv, int half_count, double step);

    const Interval& interval() const { return iv_; }
    int half_count() const { return n_; }
    double step() const { return h_; }
    std::size_t size() const { return s_.size(); }

    std::span<const double> s() const { return s_; }
    std::span<const double> t() const { return t_; }
    std::span<const double> dphi() const { return dphi_; }

    /// Node label j for storage index k.
    long node(std::size_t k) const { return static_cast<long>(k) - n_; }

private:
    Interval iv_;
    int n_;
    double h_;
    std::vector<double> s_;
    std::vector<double> t_;
    std::vector<double> dphi_;
};

/// Step size log(N)/N.
double default_step(int half_count);

/// Builds the grid for N >= 2; h defaults to log(N)/N.
/// Throws std::invalid_argument for N < 2 or non-positive h.
DEGrid build_grid(const Interval& iv, int half_count, std::optional<double> step = std::nullopt);

} // namespace desinc
