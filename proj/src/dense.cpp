#include "hk/dense.hpp"

namespace hk {

RowSupport RowSupport::of(const DenseMatrix& m) {
  RowSupport s;
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  s.first.assign(rows, 0);
  s.last.assign(rows, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t lo = cols, hi = 0;
    for (std::size_t k = 0; k < cols; ++k) {
      if (m(i, k) != 0.0) {
        if (lo == cols) lo = k;
        hi = k + 1;
      }
    }
    if (lo == cols) lo = hi = 0;
    s.first[i] = lo;
    s.last[i] = hi;
  }
  return s;
}

AxisOperator::AxisOperator(DenseMatrix m)
    : matrix(std::move(m)),
      transpose(matrix.transpose()),
      support(RowSupport::of(matrix)),
      transpose_support(RowSupport::of(transpose)) {}

}  // namespace hk
