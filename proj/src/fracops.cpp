#include "hk/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hk/errors.hpp"

namespace hk {

void FracParams::validate() const { validate_for(r); }

void FracParams::validate_for(double exponent) const {
  if (!(exponent > 1.0) || !std::isfinite(exponent))
    throw ParameterError("exponent r must satisfy r > 1 (got " + std::to_string(exponent) + ")");
  if (!(alpha > 1.0 / exponent && alpha < 1.0))
    throw ParameterError("order alpha must satisfy 1/r < alpha < 1 (alpha=" + std::to_string(alpha) +
                         ", r=" + std::to_string(exponent) + ")");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw ParameterError("type beta must lie in [0,1] (got " + std::to_string(beta) + ")");
}

namespace fracops {

namespace {

// 1 - (1-t)^nu for t in (0,1], accurate for small t.
double one_minus_pow(double t, double nu) {
  if (t >= 1.0) return 1.0;
  return -std::expm1(nu * std::log1p(-t));
}

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0) || !std::isfinite(mu))
    throw ParameterError("integral order must lie in (0,1] (got " + std::to_string(mu) + ")");
}

void check_increasing(std::span<const double> u) {
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (!(u[i] > u[i - 1]))
      throw KernelDomainError("psi values are not strictly increasing at node " + std::to_string(i));
  }
}

std::vector<double> reflect(std::span<const double> u) {
  std::vector<double> r(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) r[k] = -u[u.size() - 1 - k];
  return r;
}

DenseMatrix banded_times(const DenseMatrix& W, const DenseMatrix& B) {
  // W has at most three nonzeros per row.
  const auto N = W.rows();
  DenseMatrix out = DenseMatrix::Zero(N, B.cols());
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index k = 0; k < N; ++k) {
      const double c = W(i, k);
      if (c != 0.0) out.row(i) += c * B.row(k);
    }
  }
  return out;
}

}  // namespace

DenseMatrix left_integral_matrix(std::span<const double> u, double mu) {
  check_mu(mu);
  check_increasing(u);
  const auto N = static_cast<Eigen::Index>(u.size());
  if (mu == 0.0) return DenseMatrix::Identity(N, N);
  DenseMatrix m = DenseMatrix::Zero(N, N);
  const double inv_gamma = 1.0 / std::tgamma(mu);
  for (Eigen::Index i = 1; i < N; ++i) {
    const double U = u[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < i; ++j) {
      const double uj = u[static_cast<std::size_t>(j)];
      const double a = U - uj;
      const double h = u[static_cast<std::size_t>(j + 1)] - uj;
      const double t = (j + 1 == i) ? 1.0 : h / a;
      const double F0 = one_minus_pow(t, mu) / mu;                            // ∫₀ᵗ (1-s)^{μ-1}
      const double G = F0 - one_minus_pow(t, mu + 1.0) / (mu + 1.0);           // ∫₀ᵗ s(1-s)^{μ-1}
      const double a_mu = std::pow(a, mu);
      const double to_right = a_mu * G / t;  // a^{μ+1} G / h
      const double to_left = a_mu * F0 - to_right;
      m(i, j) += inv_gamma * to_left;
      m(i, j + 1) += inv_gamma * to_right;
    }
  }
  return m;
}

DenseMatrix psi_derivative_matrix(std::span<const double> u) {
  check_increasing(u);
  const auto N = static_cast<Eigen::Index>(u.size());
  if (N < 3) throw SizeError("derivative needs at least three nodes");
  DenseMatrix w = DenseMatrix::Zero(N, N);
  auto at = [&](Eigen::Index k) { return u[static_cast<std::size_t>(k)]; };
  for (Eigen::Index i = 1; i + 1 < N; ++i) {
    const double hm = at(i) - at(i - 1);
    const double hp = at(i + 1) - at(i);
    w(i, i - 1) = -hp / (hm * (hm + hp));
    w(i, i) = (hp - hm) / (hm * hp);
    w(i, i + 1) = hm / (hp * (hm + hp));
  }
  {
    const double h1 = at(1) - at(0);
    const double h2 = at(2) - at(1);
    w(0, 0) = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
    w(0, 1) = (h1 + h2) / (h1 * h2);
    w(0, 2) = -h1 / (h2 * (h1 + h2));
  }
  {
    const double h1 = at(N - 1) - at(N - 2);
    const double h2 = at(N - 2) - at(N - 3);
    w(N - 1, N - 1) = (2.0 * h1 + h2) / (h1 * (h1 + h2));
    w(N - 1, N - 2) = -(h1 + h2) / (h1 * h2);
    w(N - 1, N - 3) = h1 / (h2 * (h1 + h2));
  }
  return w;
}

DenseMatrix flip(const DenseMatrix& m) {
  return m.colwise().reverse().rowwise().reverse();
}

DenseMatrix left_integral_cells_matrix(std::span<const double> u, std::span<const double> points,
                                       double mu) {
  check_mu(mu);
  check_increasing(u);
  const auto C = static_cast<Eigen::Index>(u.size()) - 1;
  const auto P = static_cast<Eigen::Index>(points.size());
  if (mu == 0.0) {
    if (P != C) throw SizeError("order-0 cell integral needs one point per cell");
    return DenseMatrix::Identity(C, C);
  }
  DenseMatrix m = DenseMatrix::Zero(P, C);
  const double inv = 1.0 / std::tgamma(mu + 1.0);
  for (Eigen::Index p = 0; p < P; ++p) {
    const double U = points[static_cast<std::size_t>(p)];
    for (Eigen::Index c = 0; c < C; ++c) {
      const double lo = u[static_cast<std::size_t>(c)];
      if (!(lo < U)) break;
      const double hi = std::min(u[static_cast<std::size_t>(c + 1)], U);
      m(p, c) = inv * (std::pow(U - lo, mu) - std::pow(U - hi, mu));
    }
  }
  return m;
}

DenseMatrix forward_difference_matrix(std::span<const double> u) {
  check_increasing(u);
  const auto N = static_cast<Eigen::Index>(u.size());
  DenseMatrix w = DenseMatrix::Zero(N - 1, N);
  for (Eigen::Index c = 0; c + 1 < N; ++c) {
    const double h = u[static_cast<std::size_t>(c + 1)] - u[static_cast<std::size_t>(c)];
    w(c, c) = -1.0 / h;
    w(c, c + 1) = 1.0 / h;
  }
  return w;
}

DenseMatrix midpoint_difference_matrix(std::span<const double> u, std::span<const double> um) {
  check_increasing(u);
  check_increasing(um);
  const auto N = static_cast<Eigen::Index>(u.size());
  if (N < 4) throw SizeError("midpoint differences need at least four nodes");
  if (static_cast<Eigen::Index>(um.size()) != N - 1) throw SizeError("one midpoint per cell expected");
  DenseMatrix w = DenseMatrix::Zero(N, N - 1);
  for (Eigen::Index i = 1; i + 1 < N; ++i) {
    const double h = um[static_cast<std::size_t>(i)] - um[static_cast<std::size_t>(i - 1)];
    w(i, i - 1) = -1.0 / h;
    w(i, i) = 1.0 / h;
  }
  auto at = [&](Eigen::Index k) { return u[static_cast<std::size_t>(k)]; };
  const double t0 = (at(0) - at(1)) / (at(2) - at(1));
  w.row(0) = w.row(1) + t0 * (w.row(2) - w.row(1));
  const double t1 = (at(N - 1) - at(N - 2)) / (at(N - 3) - at(N - 2));
  w.row(N - 1) = w.row(N - 2) + t1 * (w.row(N - 3) - w.row(N - 2));
  return w;
}

}  // namespace fracops

OperatorMatrices1D OperatorMatrices1D::build(const Grid1D& g, const PsiMap& psi,
                                             const FracParams& params) {
  if (g.interior() < 3) throw SizeError("Hilfer operators need at least 3 interior nodes");
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw ParameterError("order alpha must lie in (0,1)");
  if (!(params.beta >= 0.0 && params.beta <= 1.0))
    throw ParameterError("type beta must lie in [0,1]");
  psi.validate_on(g);
  const auto u = psi.sample(g);
  const auto ur = fracops::reflect(u);

  OperatorMatrices1D ops;
  ops.I_left = fracops::left_integral_matrix(u, params.alpha);
  ops.I_right = fracops::flip(fracops::left_integral_matrix(ur, params.alpha));

  ops.left_inner = fracops::left_integral_matrix(u, params.inner_order());
  ops.left_W = fracops::psi_derivative_matrix(u);
  ops.left_outer = fracops::left_integral_matrix(u, params.outer_order());
  ops.D_left = ops.left_outer * fracops::banded_times(ops.left_W, ops.left_inner);

  const DenseMatrix rin = fracops::left_integral_matrix(ur, params.inner_order());
  const DenseMatrix rW = fracops::psi_derivative_matrix(ur);
  const DenseMatrix rout = fracops::left_integral_matrix(ur, params.outer_order());
  const DenseMatrix rD = rout * fracops::banded_times(rW, rin);
  ops.right_inner = fracops::flip(rin);
  ops.right_W = fracops::flip(rW);
  ops.right_outer = fracops::flip(rout);
  ops.D_right = fracops::flip(rD);
  return ops;
}

StaggeredOperators1D StaggeredOperators1D::build(const Grid1D& g, const PsiMap& psi,
                                                 const FracParams& params) {
  if (g.interior() < 3) throw SizeError("Hilfer operators need at least 3 interior nodes");
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw ParameterError("order alpha must lie in (0,1)");
  if (!(params.beta >= 0.0 && params.beta <= 1.0))
    throw ParameterError("type beta must lie in [0,1]");
  psi.validate_on(g);
  StaggeredOperators1D ops;
  const std::size_t C = g.size() - 1;
  ops.midpoints.resize(C);
  ops.widths.resize(C);
  std::vector<double> um(C);
  for (std::size_t c = 0; c < C; ++c) {
    ops.midpoints[c] = 0.5 * (g[c] + g[c + 1]);
    ops.widths[c] = g[c + 1] - g[c];
    um[c] = psi(ops.midpoints[c]);
  }
  const auto u = psi.sample(g);
  const double inner = params.inner_order(), outer = params.outer_order();

  const DenseMatrix Wf = fracops::forward_difference_matrix(u);
  ops.D_left = fracops::left_integral_cells_matrix(u, um, outer) *
               (Wf * fracops::left_integral_matrix(u, inner));

  const auto ur = fracops::reflect(u);
  const auto umr = fracops::reflect(um);
  const DenseMatrix Wm = fracops::midpoint_difference_matrix(ur, umr);
  const DenseMatrix rD = fracops::left_integral_matrix(ur, outer) *
                         (Wm * fracops::left_integral_cells_matrix(ur, umr, inner));
  ops.D_right = fracops::flip(rD);
  return ops;
}

namespace {

std::vector<double> times(const DenseMatrix& m, std::span<const double> f) {
  Eigen::Map<const Eigen::VectorXd> v(f.data(), static_cast<Eigen::Index>(f.size()));
  Eigen::VectorXd out = m * v;
  return {out.data(), out.data() + out.size()};
}

void check_samples(std::span<const double> f, const Grid1D& g) {
  if (f.size() != g.size())
    throw SizeError("sample count " + std::to_string(f.size()) + " does not match grid size " +
                    std::to_string(g.size()));
}

void check_integral_order(double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) throw ParameterError("integral order must lie in (0,1]");
}

}  // namespace

std::vector<double> rl_integral_left(std::span<const double> f, double mu, const PsiMap& psi,
                                     const Grid1D& g) {
  check_samples(f, g);
  check_integral_order(mu);
  psi.validate_on(g);
  return times(fracops::left_integral_matrix(psi.sample(g), mu), f);
}

std::vector<double> rl_integral_right(std::span<const double> f, double mu, const PsiMap& psi,
                                      const Grid1D& g) {
  check_samples(f, g);
  check_integral_order(mu);
  psi.validate_on(g);
  const auto ur = fracops::reflect(psi.sample(g));
  return times(fracops::flip(fracops::left_integral_matrix(ur, mu)), f);
}

std::vector<double> hilfer_deriv_left_cells(std::span<const double> f, const FracParams& params,
                                            const PsiMap& psi, const Grid1D& g) {
  check_samples(f, g);
  return times(StaggeredOperators1D::build(g, psi, params).D_left, f);
}

std::vector<double> hilfer_deriv_left(std::span<const double> f, const FracParams& params,
                                      const PsiMap& psi, const Grid1D& g) {
  check_samples(f, g);
  return times(OperatorMatrices1D::build(g, psi, params).D_left, f);
}

std::vector<double> hilfer_deriv_right(std::span<const double> f, const FracParams& params,
                                       const PsiMap& psi, const Grid1D& g) {
  check_samples(f, g);
  return times(OperatorMatrices1D::build(g, psi, params).D_right, f);
}

}  // namespace hk
