#include "desinc/weights.hpp"
#include "desinc/format.hpp"

#include <ostream>
#include <vector>

namespace desinc {

WeightMatrix build_weights(const DEGrid& grid)
{
    const auto m = static_cast<Eigen::Index>(grid.size());
    const long n = grid.half_count();
    const double h = grid.step();
    const auto dphi = grid.dphi();

    // P_j(s_i) depends only on i - j, which ranges over -2N..2N.
    std::vector<double> kernel(static_cast<std::size_t>(4 * n + 1));
    for (long k = -2 * n; k <= 2 * n; ++k)
        kernel[static_cast<std::size_t>(k + 2 * n)] =
            h * (0.5 + si(std::numbers::pi * static_cast<double>(k)) / std::numbers::pi);

    Matrix w(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            w(i, j) = dphi[static_cast<std::size_t>(j)] *
                      kernel[static_cast<std::size_t>(i - j + 2 * n)];
    return WeightMatrix{grid, std::move(w)};
}

Matrix TriangularSplit::reassemble() const
{
    Matrix w = e + f;
    w.diagonal() += d;
    return w;
}

TriangularSplit split(const Matrix& w)
{
    TriangularSplit parts;
    parts.d = w.diagonal();
    parts.e = w.triangularView<Eigen::StrictlyLower>();
    parts.f = w.triangularView<Eigen::StrictlyUpper>();
    return parts;
}

void write_matrix_csv(std::ostream& out, const Matrix& m)
{
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0)
                out << ',';
            out << format_scientific(m(i, j));
        }
        out << '\n';
    }
}

} // namespace desinc
