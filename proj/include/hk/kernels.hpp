#pragma once

// Field kernels. A field is stored row-major as values[i * ny + j], i indexing the
// x-axis and j the y-axis. Every output entry is produced by exactly one thread with a
// fixed summation order, and reductions combine per-row partials serially in row order,
// so the OpenMP kernels return bit-identical results to the serial reference for any
// thread count.

#include <cstddef>
#include <span>

#include "hk/dense.hpp"

namespace hk::kernels {

/// out(i,j) = Σ_k A(i,k)·in(k,j) along the x-axis; in has A.cols() rows of length ny,
/// out has A.rows().
void apply_x(const DenseMatrix& A, const RowSupport& s, std::span<const double> in,
             std::span<double> out, std::size_t ny);

/// out(i,j) = Σ_k A(j,k)·in(i,k) along the y-axis; nx rows, of length A.cols() in in and
/// A.rows() in out.
void apply_y(const DenseMatrix& A, const RowSupport& s, std::span<const double> in,
             std::span<double> out, std::size_t nx);

/// Σ_{i,j} w(i,j)·v(i,j)
double weighted_sum(std::span<const double> w, std::span<const double> v, std::size_t nx,
                    std::size_t ny);

/// Σ_{i,j} w(i,j)·|v(i,j)|^r
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> v, double r,
                            std::size_t nx, std::size_t ny);

/// out = w ⊙ |v|^{r-2} v, elementwise.
void weighted_flux(std::span<const double> w, std::span<const double> v, double r,
                   std::span<double> out);

}  // namespace hk::kernels

namespace hk::kernels::serial {

void apply_x(const DenseMatrix& A, const RowSupport& s, std::span<const double> in,
             std::span<double> out, std::size_t ny);
void apply_y(const DenseMatrix& A, const RowSupport& s, std::span<const double> in,
             std::span<double> out, std::size_t nx);
double weighted_sum(std::span<const double> w, std::span<const double> v, std::size_t nx,
                    std::size_t ny);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> v, double r,
                            std::size_t nx, std::size_t ny);
void weighted_flux(std::span<const double> w, std::span<const double> v, double r,
                   std::span<double> out);

}  // namespace hk::kernels::serial
