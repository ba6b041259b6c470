#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace hk {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Column range [first[i], last[i]) holding the nonzeros of row i. Lets the field kernels
/// skip the structural zeros of triangular and Hessenberg operators.
struct RowSupport {
  std::vector<std::size_t> first;
  std::vector<std::size_t> last;

  static RowSupport of(const DenseMatrix& m);
};

/// A dense operator together with its transpose and row supports of both.
struct AxisOperator {
  DenseMatrix matrix;
  DenseMatrix transpose;
  RowSupport support;
  RowSupport transpose_support;

  explicit AxisOperator(DenseMatrix m);
  AxisOperator() = default;
  std::size_t rows() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

}  // namespace hk
