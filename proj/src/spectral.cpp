#include "hk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hk/energy.hpp"
#include "hk/errors.hpp"
#include "hk/torsion.hpp"

namespace hk {

double rayleigh_quotient(const GradientOperator& op, const GridField& u, double r) {
  const auto& d = op.domain();
  double den = 0.0;
  for (std::size_t k : d.interior()) den += d.weights()[k] * std::pow(std::abs(u.values[k]), r);
  if (!(den > 0.0)) throw ParameterError("Rayleigh quotient of the zero field");
  return op.modular(u, r) / den;
}

namespace {

double eigen_residual(const GradientOperator& op, const GridField& theta, double lambda, double r) {
  const auto& d = op.domain();
  const auto a = op.flux_divergence(std::span<const double>(theta.values), r);
  double res = 0.0;
  for (std::size_t k : d.interior()) {
    const double t = theta.values[k];
    const double rhs = lambda * std::copysign(std::pow(std::abs(t), r - 1.0), t);
    res = std::max(res, std::abs(a[k] / d.weights()[k] - rhs));
  }
  return res;
}

}  // namespace

EigenPair first_eigenpair(const GradientOperator& op, const SeparablePreconditioner& pre, double r,
                          const EigenOptions& opt) {
  check_exponent(r);
  const auto& d = op.domain();
  const std::size_t n = d.interior().size();

  // Positive start: a bump times a seeded smooth perturbation. High-frequency noise
  // decays slowly under inverse iteration and gains nothing.
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(-0.08, 0.08);
  double cx[3], cy[3];
  for (int i = 0; i < 3; ++i) {
    cx[i] = U(rng);
    cy[i] = U(rng);
  }
  const double Tx = d.gx().length(), Ty = d.gy().length();
  auto smooth = [](const double* c, double t) {
    double s = 1.0;
    for (int i = 0; i < 3; ++i) s += c[i] * std::sin((i + 2) * std::numbers::pi * t);
    return s;
  };
  auto u = boundary_bump(d).interior();
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t k = d.interior()[m];
    u[m] *= smooth(cx, d.x(k) / Tx) * (d.dim() == 2 ? smooth(cy, d.y(k) / Ty) : 1.0);
  }
  const double s0 = *std::max_element(u.begin(), u.end());
  for (double& v : u) v /= s0;

  std::vector<double> history;
  double lambda = rayleigh_quotient(op, GridField::from_interior(d, u), r);
  history.push_back(lambda);

  EnergyTerms terms;
  terms.r = r;
  terms.load.assign(n, 0.0);
  for (int k = 1; k <= opt.max_iter; ++k) {
    for (std::size_t m = 0; m < n; ++m)
      terms.load[m] = std::copysign(std::pow(std::abs(u[m]), r - 1.0), u[m]);
    DirichletEnergy E(op, pre, terms);
    std::vector<double> x0 = u;
    const double warm = std::pow(lambda, -1.0 / (r - 1.0));
    for (double& v : x0) v *= warm;
    DescentOptions dopt;
    dopt.tol = opt.inner_tol;
    auto res = minimize(E, std::move(x0), E.mass(), dopt);
    u = std::move(res.x);
    if (k <= opt.clip_iterations)
      for (double& v : u) v = std::max(v, 0.0);
    double sup = 0.0;
    for (double v : u) sup = std::max(sup, std::abs(v));
    if (!(sup > 0.0)) throw ConvergenceError("inverse iteration collapsed to zero");
    for (double& v : u) v /= sup;
    const double next = rayleigh_quotient(op, GridField::from_interior(d, u), r);
    history.push_back(next);
    const bool done = std::abs(next - lambda) < opt.tol * std::abs(next);
    lambda = next;
    if (done) {
      // sup θ = 1 exactly, at a positive node
      double mx = -std::numeric_limits<double>::infinity();
      for (double v : u) mx = std::max(mx, v);
      for (double& v : u) v /= mx;
      EigenPair pair{lambda, GridField::from_interior(d, u), r, k, std::move(history), 0.0};
      pair.residual = eigen_residual(op, pair.theta, lambda, r);
      return pair;
    }
  }
  std::string hist;
  const std::size_t from = history.size() > 5 ? history.size() - 5 : 0;
  for (std::size_t i = from; i < history.size(); ++i)
    hist += (hist.empty() ? "" : ", ") + std::to_string(history[i]);
  throw ConvergenceError("inverse iteration did not converge; last quotients: " + hist);
}

EigenPair first_eigenpair(const GradientOperator& op, double r, const EigenOptions& opt) {
  const SeparablePreconditioner pre(op);
  return first_eigenpair(op, pre, r, opt);
}

std::vector<double> barrier_gap(const GradientOperator& op, const EigenPair& pair) {
  const auto g = op.nodal_gradient(pair.theta);
  const double r = pair.r;
  std::vector<double> gap(g.dx.size());
  for (std::size_t k = 0; k < gap.size(); ++k) {
    double s = std::pow(std::abs(g.dx[k]), r);
    if (!g.dy.empty()) s += std::pow(std::abs(g.dy[k]), r);
    gap[k] = s - pair.lambda1 * std::pow(std::abs(pair.theta.values[k]), r);
  }
  return gap;
}

BarrierConstants barrier_constants(const GradientOperator& op, const EigenPair& pair, double delta) {
  const auto& d = op.domain();
  if (!(delta > 0.0 && delta < 0.5 * d.length()))
    throw ParameterError("strip width must satisfy 0 < delta < T/2");
  op.check(pair.theta);
  const auto gap = barrier_gap(op, pair);
  BarrierConstants b;
  b.delta = delta;
  b.strip.assign(d.size(), 0);
  double m = std::numeric_limits<double>::infinity();
  double sigma = std::numeric_limits<double>::infinity();
  const double fuzz = 1e-12 * d.length();
  for (std::size_t k : d.interior()) {
    if (d.boundary_distance(k) <= delta + fuzz) {
      b.strip[k] = 1;
      m = std::min(m, gap[k]);
    } else {
      sigma = std::min(sigma, pair.theta.values[k]);
    }
  }
  if (!std::isfinite(sigma)) throw ParameterError("no interior node lies outside the strip");
  b.sigma = sigma;
  b.m = std::isfinite(m) ? m : 0.0;
  b.ok = b.m > 0.0 && sigma > 0.0;
  if (!(b.m > 0.0)) b.reason = "gap is not positive on the strip (m=" + std::to_string(b.m) + ")";
  else if (!(sigma > 0.0)) b.reason = "eigenfunction is not positive off the strip";
  return b;
}

BarrierConstants search_barrier(const GradientOperator& op, const EigenPair& pair,
                                const std::vector<double>& candidates) {
  if (candidates.empty()) throw ParameterError("no strip widths to try");
  BarrierConstants last;
  for (double delta : candidates) {
    last = barrier_constants(op, pair, delta);
    if (last.ok) return last;
  }
  return last;
}

std::vector<double> default_delta_candidates(double T) { return {0.05 * T, 0.1 * T, 0.2 * T}; }

}  // namespace hk
