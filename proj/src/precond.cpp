#include "hk/precond.hpp"

#include <Eigen/Eigenvalues>

#include "hk/errors.hpp"

namespace hk {

namespace {

// K = Dᵀ diag(h) D restricted to interior columns (D maps nodes to cells), M = lumped
// trapezoid mass on interior nodes.
void axis_factor(const DenseMatrix& D, const Grid1D& g, Eigen::MatrixXd& K, Eigen::VectorXd& m) {
  const auto w = g.trapezoid_weights();
  const Eigen::Index C = D.rows();
  const Eigen::Index n = D.cols() - 2;
  const Eigen::MatrixXd Di = D.block(0, 1, C, n);
  Eigen::VectorXd h(C);
  for (Eigen::Index c = 0; c < C; ++c) h[c] = g[static_cast<std::size_t>(c + 1)] - g[static_cast<std::size_t>(c)];
  K = Di.transpose() * h.asDiagonal() * Di;
  K = 0.5 * (K + K.transpose());
  m.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) m[i] = w[static_cast<std::size_t>(i + 1)];
}

void eig(const Eigen::MatrixXd& K, const Eigen::VectorXd& m, Eigen::MatrixXd& V, Eigen::VectorXd& l) {
  const Eigen::MatrixXd M = m.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  if (es.info() != Eigen::Success) throw ConvergenceError("preconditioner eigendecomposition failed");
  V = es.eigenvectors();
  l = es.eigenvalues();
}

}  // namespace

SeparablePreconditioner::SeparablePreconditioner(const GradientOperator& op)
    : dim_(op.domain().dim()) {
  axis_factor(op.left_x().matrix, op.domain().gx(), Kx_, wx_);
  eig(Kx_, wx_, Vx_, lx_);
  mx_ = static_cast<std::size_t>(wx_.size());
  my_ = 1;
  if (dim_ == 2) {
    axis_factor(op.left_y().matrix, op.domain().gy(), Ky_, wy_);
    eig(Ky_, wy_, Vy_, ly_);
    my_ = static_cast<std::size_t>(wy_.size());
  }
}

std::vector<double> SeparablePreconditioner::solve(std::span<const double> g, double s,
                                                   double c) const {
  if (g.size() != mx_ * my_) throw SizeError("preconditioner input has the wrong size");
  if (!(s >= 0.0 && c >= 0.0 && s + c > 0.0)) throw ParameterError("preconditioner shift must be positive");
  const auto ix = static_cast<Eigen::Index>(mx_);
  const auto iy = static_cast<Eigen::Index>(my_);
  std::vector<double> out(g.size());
  if (dim_ == 1) {
    Eigen::Map<const Eigen::VectorXd> gv(g.data(), ix);
    Eigen::VectorXd y = Vx_.transpose() * gv;
    for (Eigen::Index a = 0; a < ix; ++a) y[a] /= s * lx_[a] + c;
    Eigen::Map<Eigen::VectorXd>(out.data(), ix) = Vx_ * y;
    return out;
  }
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> G(g.data(), ix, iy);
  RowMat Y = Vx_.transpose() * G * Vy_;
  for (Eigen::Index a = 0; a < ix; ++a)
    for (Eigen::Index b = 0; b < iy; ++b) Y(a, b) /= s * (lx_[a] + ly_[b]) + c;
  Eigen::Map<RowMat>(out.data(), ix, iy) = Vx_ * Y * Vy_.transpose();
  return out;
}

std::vector<double> SeparablePreconditioner::stiffness_times(std::span<const double> v) const {
  if (v.size() != mx_ * my_) throw SizeError("stiffness input has the wrong size");
  const auto ix = static_cast<Eigen::Index>(mx_);
  const auto iy = static_cast<Eigen::Index>(my_);
  std::vector<double> out(v.size());
  if (dim_ == 1) {
    Eigen::Map<const Eigen::VectorXd> vv(v.data(), ix);
    Eigen::Map<Eigen::VectorXd>(out.data(), ix) = Kx_ * vv;
    return out;
  }
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> V(v.data(), ix, iy);
  Eigen::Map<RowMat>(out.data(), ix, iy) = Kx_ * V * wy_.asDiagonal() + wx_.asDiagonal() * V * Ky_;
  return out;
}

}  // namespace hk
