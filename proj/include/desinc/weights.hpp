#pragma once

#include "desinc/grid.hpp"

#include <Eigen/Dense>

#include <iosfwd>

namespace desinc {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Collocation weights w_ij = phi'(s_j) J(j,h)(s_i) over a DE grid.
/// With integer node offsets this is dphi[j] * h * (1/2 + Si(pi (i - j)) / pi).
struct WeightMatrix {
    DEGrid grid;
    Matrix w;

    Eigen::Index order() const { return w.rows(); }
};

/// w = diag(d) + e + f with e strictly lower and f strictly upper triangular.
struct TriangularSplit {
    Vector d;
    Matrix e;
    Matrix f;

    Eigen::Index order() const { return d.size(); }
    Matrix reassemble() const;
};

WeightMatrix build_weights(const DEGrid& grid);

TriangularSplit split(const Matrix& w);
inline TriangularSplit split(const WeightMatrix& wm) { return split(wm.w); }

/// Infinity norm: max over rows of the sum of absolute values (0 for an empty matrix).
template <typename Derived>
double row_sum_norm(const Eigen::MatrixBase<Derived>& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// One matrix row per line, comma separated, shortest round-trip scientific notation.
void write_matrix_csv(std::ostream& out, const Matrix& m);

} // namespace desinc
