#include "desinc/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace desinc {

DEGrid::DEGrid(Interval iv, int half_count, double step)
    : iv_(iv), n_(half_count), h_(step)
{
    if (half_count < 2)
        throw std::invalid_argument("DEGrid: N must be at least 2");
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("DEGrid: step size must be positive and finite");

    const std::size_t m = 2 * static_cast<std::size_t>(n_) + 1;
    s_.resize(m);
    t_.resize(m);
    dphi_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        s_[k] = static_cast<double>(node(k)) * h_;
        t_[k] = phi_de(s_[k], iv_);
        dphi_[k] = dphi_de(s_[k], iv_);
    }
}

double default_step(int half_count)
{
    if (half_count < 2)
        throw std::invalid_argument("default_step: N must be at least 2");
    return std::log(static_cast<double>(half_count)) / half_count;
}

DEGrid build_grid(const Interval& iv, int half_count, std::optional<double> step)
{
    if (half_count < 2)
        throw std::invalid_argument("build_grid: N must be at least 2");
    return DEGrid(iv, half_count, step.value_or(default_step(half_count)));
}

} // namespace desinc
