#include <vector>

#include "hk/errors.hpp"
#include "hk/kernels.hpp"
#include "kernel_rows.hpp"

namespace hk::kernels::serial {

void apply_x(const DenseMatrix& A, const RowSupport& s, std::span<const double> in,
             std::span<double> out, std::size_t ny) {
  const auto nx = static_cast<std::size_t>(A.rows());
  if (in.size() != static_cast<std::size_t>(A.cols()) * ny || out.size() != nx * ny)
    throw SizeError("apply_x: shape mismatch");
  for (std::size_t i = 0; i < nx; ++i)
    detail::row_apply_x(A, s, in.data(), out.data() + i * ny, i, ny);
}

void apply_y(const DenseMatrix& A, const RowSupport& s, std::span<const double> in,
             std::span<double> out, std::size_t nx) {
  const auto ny_in = static_cast<std::size_t>(A.cols());
  const auto ny_out = static_cast<std::size_t>(A.rows());
  if (in.size() != nx * ny_in || out.size() != nx * ny_out) throw SizeError("apply_y: shape mismatch");
  for (std::size_t i = 0; i < nx; ++i)
    detail::row_apply_y(A, s, in.data() + i * ny_in, out.data() + i * ny_out);
}

double weighted_sum(std::span<const double> w, std::span<const double> v, std::size_t nx,
                    std::size_t ny) {
  std::vector<double> partial(nx);
  for (std::size_t i = 0; i < nx; ++i)
    partial[i] = detail::row_weighted_sum(w.data() + i * ny, v.data() + i * ny, ny);
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> v, double r,
                            std::size_t nx, std::size_t ny) {
  std::vector<double> partial(nx);
  for (std::size_t i = 0; i < nx; ++i)
    partial[i] = detail::row_weighted_abs_pow(w.data() + i * ny, v.data() + i * ny, r, ny);
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

void weighted_flux(std::span<const double> w, std::span<const double> v, double r,
                   std::span<double> out) {
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = w[k] * detail::signed_pow_m1(v[k], r);
}

}  // namespace hk::kernels::serial
