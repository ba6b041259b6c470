#include "hk/torsion.hpp"

#include <algorithm>
#include <cmath>

#include "hk/energy.hpp"
#include "hk/errors.hpp"

namespace hk {

GridField boundary_bump(const Domain& d) {
  const double Tx = d.gx().length();
  const double Ty = d.dim() == 2 ? d.gy().length() : 0.0;
  return GridField::sample(d, [&](double x, double y) {
    const double bx = x * (Tx - x);
    return d.dim() == 2 ? bx * y * (Ty - y) : bx;
  });
}

TorsionSolution solve_torsion(const GradientOperator& op, const SeparablePreconditioner& pre,
                              double r, const TorsionOptions& opt,
                              const std::vector<double>* initial_interior) {
  check_exponent(r);
  if (!(opt.tol > 0.0)) throw ParameterError("torsion tolerance must be positive");
  const auto& d = op.domain();
  EnergyTerms terms;
  terms.r = r;
  terms.load.assign(d.interior().size(), 1.0);
  DirichletEnergy J(op, pre, terms);

  std::vector<double> x0;
  if (initial_interior) {
    if (initial_interior->size() != d.interior().size()) throw SizeError("torsion initial guess has the wrong size");
    x0 = *initial_interior;
  } else {
    const auto phi = boundary_bump(d);
    double integral = 0.0;
    for (std::size_t k : d.interior()) integral += d.weights()[k] * phi.values[k];
    const double t = std::pow(integral / op.modular(phi, r), 1.0 / (r - 1.0));
    x0 = phi.interior();
    for (double& v : x0) v *= t;
  }

  DescentOptions dopt;
  dopt.tol = opt.tol;
  dopt.max_iter = opt.max_iter;
  auto res = minimize(J, std::move(x0), J.mass(), dopt);
  if (!res.converged)
    throw ConvergenceError("torsion solve did not converge: residual " + std::to_string(res.gradient_norm) +
                           " after " + std::to_string(res.iterations) + " iterations");
  TorsionSolution sol{GridField::from_interior(d, res.x), 0.0, r, op.params(), res.iterations,
                      res.gradient_norm, std::move(res.energy_history)};
  sol.l = sol.e.sup_norm();
  return sol;
}

GridField solve_dirichlet(const GradientOperator& op, const SeparablePreconditioner& pre, double r,
                          std::vector<double> load, const std::optional<CoefficientFunction>& M,
                          const TorsionOptions& opt) {
  check_exponent(r);
  const auto& d = op.domain();
  if (load.size() != d.interior().size()) throw SizeError("load has the wrong size");
  double scale = 0.0;
  for (double v : load) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return GridField::zero(d);
  EnergyTerms terms;
  terms.r = r;
  terms.M = M;
  terms.load = std::move(load);
  DirichletEnergy J(op, pre, terms);
  DescentOptions dopt;
  dopt.tol = opt.tol;
  dopt.scale = scale;
  dopt.max_iter = opt.max_iter;
  const auto phi = boundary_bump(d);
  double work = 0.0;
  for (std::size_t m = 0; m < d.interior().size(); ++m) {
    const std::size_t k = d.interior()[m];
    work += d.weights()[k] * phi.values[k] * terms.load[m];
  }
  const double t = std::copysign(std::pow(std::abs(work) / op.modular(phi, r), 1.0 / (r - 1.0)), work);
  std::vector<double> x0 = phi.interior();
  for (double& v : x0) v *= t == 0.0 ? 1e-3 * scale : t;
  auto res = minimize(J, std::move(x0), J.mass(), dopt);
  if (!res.converged)
    throw ConvergenceError("Dirichlet solve did not converge: residual " + std::to_string(res.gradient_norm));
  return GridField::from_interior(d, res.x);
}

TorsionSolution solve_torsion(const GradientOperator& op, double r, const TorsionOptions& opt) {
  const SeparablePreconditioner pre(op);
  return solve_torsion(op, pre, r, opt);
}

}  // namespace hk
