#pragma once

// Inverse of s·K + c·M on interior unknowns, where K is the quadratic form of the r = 2
// fractional Dirichlet energy Σ_axes ∫|D u|² and M the lumped trapezoid mass. Both are
// separable, so one generalized eigendecomposition per axis diagonalizes them.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hk/field.hpp"

namespace hk {

class SeparablePreconditioner {
 public:
  explicit SeparablePreconditioner(const GradientOperator& op);

  /// z = (s·K + c·M)⁻¹ g on interior unknowns; needs s ≥ 0, c ≥ 0, s + c > 0.
  std::vector<double> solve(std::span<const double> g, double s, double c) const;

  /// K v on interior unknowns (for tests).
  std::vector<double> stiffness_times(std::span<const double> v) const;

  /// Generalized eigenvalues along x, ascending.
  const Eigen::VectorXd& x_eigenvalues() const noexcept { return lx_; }

 private:
  int dim_;
  std::size_t mx_, my_;
  Eigen::MatrixXd Vx_, Vy_;
  Eigen::VectorXd lx_, ly_;
  Eigen::MatrixXd Kx_, Ky_;
  Eigen::VectorXd wx_, wy_;
};

}  // namespace hk
