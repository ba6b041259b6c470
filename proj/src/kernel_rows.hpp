#pragma once

// Per-row bodies shared by the serial and OpenMP kernels so both produce identical
// floating-point results.

#include <cmath>
#include <cstddef>

#include "hk/dense.hpp"

namespace hk::kernels::detail {

inline double abs_pow(double v, double r) {
  const double a = std::abs(v);
  if (r == 2.0) return a * a;
  if (r == 3.0) return a * a * a;
  return a == 0.0 ? 0.0 : std::pow(a, r);
}

inline double signed_pow_m1(double v, double r) {
  // |v|^{r-2} v
  if (r == 2.0) return v;
  if (r == 3.0) return std::abs(v) * v;
  if (v == 0.0) return 0.0;
  return std::pow(std::abs(v), r - 2.0) * v;
}

inline void row_apply_x(const DenseMatrix& A, const RowSupport& s, const double* in, double* out_row,
                        std::size_t i, std::size_t ny) {
  for (std::size_t j = 0; j < ny; ++j) out_row[j] = 0.0;
  const double* a = A.data() + i * static_cast<std::size_t>(A.cols());
  for (std::size_t k = s.first[i]; k < s.last[i]; ++k) {
    const double c = a[k];
    if (c == 0.0) continue;
    const double* src = in + k * ny;
    for (std::size_t j = 0; j < ny; ++j) out_row[j] += c * src[j];
  }
}

inline void row_apply_y(const DenseMatrix& A, const RowSupport& s, const double* in_row,
                        double* out_row) {
  const std::size_t cols = static_cast<std::size_t>(A.cols());
  const std::size_t rows = static_cast<std::size_t>(A.rows());
  for (std::size_t j = 0; j < rows; ++j) {
    const double* a = A.data() + j * cols;
    double acc = 0.0;
    for (std::size_t k = s.first[j]; k < s.last[j]; ++k) acc += a[k] * in_row[k];
    out_row[j] = acc;
  }
}

inline double row_weighted_sum(const double* w, const double* v, std::size_t ny) {
  double acc = 0.0;
  for (std::size_t j = 0; j < ny; ++j) acc += w[j] * v[j];
  return acc;
}

inline double row_weighted_abs_pow(const double* w, const double* v, double r, std::size_t ny) {
  double acc = 0.0;
  for (std::size_t j = 0; j < ny; ++j) acc += w[j] * abs_pow(v[j], r);
  return acc;
}

}  // namespace hk::kernels::detail
