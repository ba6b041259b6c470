#include "hk/energy.hpp"

#include <algorithm>
#include <cmath>

#include "hk/errors.hpp"
#include "hk/kernels.hpp"

namespace hk {

DirichletEnergy::DirichletEnergy(const GradientOperator& op, const SeparablePreconditioner& pre,
                                 EnergyTerms terms)
    : op_(op), pre_(pre), terms_(std::move(terms)) {
  check_exponent(terms_.r);
  const auto& d = op_.domain();
  mass_.resize(d.interior().size());
  for (std::size_t m = 0; m < mass_.size(); ++m) mass_[m] = d.weights()[d.interior()[m]];
  if (!terms_.load.empty() && terms_.load.size() != mass_.size())
    throw SizeError("energy load has the wrong size");
  if (terms_.g_lambda < 0.0) throw ParameterError("auxiliary term must be nondecreasing");
  if (terms_.g_lambda > 0.0) check_exponent(terms_.g_exponent);
}

double DirichletEnergy::g(double s) const {
  if (terms_.g_lambda == 0.0) return 0.0;
  const double e = terms_.g_exponent;
  return terms_.g_lambda * (e == 2.0 ? s : std::copysign(std::pow(std::abs(s), e - 1.0), s));
}

double DirichletEnergy::G(double s) const {
  if (terms_.g_lambda == 0.0) return 0.0;
  const double e = terms_.g_exponent;
  return terms_.g_lambda * std::pow(std::abs(s), e) / e;
}

double DirichletEnergy::g_prime(double s) const {
  if (terms_.g_lambda == 0.0) return 0.0;
  const double e = terms_.g_exponent;
  if (e == 2.0) return terms_.g_lambda;
  return terms_.g_lambda * (e - 1.0) * std::pow(std::max(std::abs(s), 1e-300), e - 2.0);
}

double DirichletEnergy::value(std::span<const double> x) const {
  const auto& d = op_.domain();
  const auto u = d.extend(x);
  const double rho = op_.modular(std::span<const double>(u), terms_.r);
  double s = coefficient_antiderivative(rho) / terms_.r;
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double b = terms_.load.empty() ? 0.0 : terms_.load[m];
    s += mass_[m] * (G(x[m]) - b * x[m]);
  }
  return s;
}

void DirichletEnergy::gradient(std::span<const double> x, std::span<double> out) const {
  const auto& d = op_.domain();
  const auto grad = op_.gradient_raw(d.extend(x));
  const double rho = op_.modular_of_gradient(grad, terms_.r);
  const double M = coefficient(rho);
  const auto a = op_.flux_divergence(grad, terms_.r);
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double b = terms_.load.empty() ? 0.0 : terms_.load[m];
    out[m] = M * a[d.interior()[m]] + mass_[m] * (g(x[m]) - b);
  }
}

void DirichletEnergy::linearize(std::span<const double> x) {
  const auto& d = op_.domain();
  const auto grad = op_.gradient_raw(d.extend(x));
  const double r = terms_.r;
  const double rho = op_.modular_of_gradient(grad, r);
  M_ = coefficient(rho);
  Mp_ = coefficient_derivative(rho);
  const auto a = op_.flux_divergence(grad, r);
  a_ = d.restrict_interior(a);

  double dmax = 0.0;
  for (double v : grad.dx) dmax = std::max(dmax, std::abs(v));
  for (double v : grad.dy) dmax = std::max(dmax, std::abs(v));
  const double floor = std::max(1e-6 * dmax, 1e-300);
  auto weights = [&](const std::vector<double>& D, const std::vector<double>& W, std::vector<double>& c) {
    c.resize(D.size());
    for (std::size_t k = 0; k < D.size(); ++k) {
      const double m = std::max(std::abs(D[k]), floor);
      c[k] = W[k] * (r - 1.0) * (r == 2.0 ? 1.0 : std::pow(m, r - 2.0));
    }
  };
  weights(grad.dx, op_.weights_dx(), cx_);
  if (d.dim() == 2) weights(grad.dy, op_.weights_dy(), cy_);

  double wsum = 0.0, csum = 0.0;
  for (std::size_t k = 0; k < cx_.size(); ++k) {
    wsum += op_.weights_dx()[k];
    csum += cx_[k];
  }
  for (std::size_t k = 0; k < cy_.size(); ++k) {
    wsum += op_.weights_dy()[k];
    csum += cy_[k];
  }
  pre_s_ = M_ * csum / wsum;

  gp_.resize(x.size());
  double gsum = 0.0, msum = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    gp_[m] = mass_[m] * g_prime(x[m]);
    gsum += gp_[m];
    msum += mass_[m];
  }
  pre_c_ = gsum / msum;
  if (!(pre_s_ > 0.0)) pre_s_ = M_ * (r - 1.0) * std::pow(floor, r - 2.0) + 1e-300;
}

void DirichletEnergy::hessian_times(std::span<const double> v, std::span<double> out) const {
  const auto& d = op_.domain();
  const std::size_t nx = d.nx(), ny = d.ny();
  const auto full = d.extend(v);
  auto g = op_.gradient_raw(full);
  std::vector<double> acc(d.size());
  for (std::size_t k = 0; k < g.dx.size(); ++k) g.dx[k] *= cx_[k];
  const auto& lx = op_.left_x();
  kernels::apply_x(lx.transpose, lx.transpose_support, g.dx, acc, ny);
  if (d.dim() == 2) {
    std::vector<double> tmp(d.size());
    for (std::size_t k = 0; k < g.dy.size(); ++k) g.dy[k] *= cy_[k];
    const auto& ly = op_.left_y();
    kernels::apply_y(ly.transpose, ly.transpose_support, g.dy, tmp, nx);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += tmp[k];
  }
  double av = 0.0;
  if (Mp_ != 0.0)
    for (std::size_t m = 0; m < v.size(); ++m) av += a_[m] * v[m];
  const double rank1 = terms_.r * Mp_ * av;
  for (std::size_t m = 0; m < v.size(); ++m)
    out[m] = M_ * acc[d.interior()[m]] + rank1 * a_[m] + gp_[m] * v[m];
}

void DirichletEnergy::precondition(std::span<const double> r, std::span<double> z) const {
  const auto s = pre_.solve(r, pre_s_, pre_c_);
  std::copy(s.begin(), s.end(), z.begin());
}

}  // namespace hk
