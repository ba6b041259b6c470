#pragma once

#include <optional>
#include <vector>

#include "hk/coeff.hpp"
#include "hk/field.hpp"
#include "hk/precond.hpp"

namespace hk {

struct TorsionOptions {
  double tol = 1e-10;  ///< on the strong residual sup-norm
  int max_iter = 200;
};

/// e_r solving A_r e = 1 weakly with zero trace; l = sup e.
struct TorsionSolution {
  GridField e;
  double l = 0.0;
  double r = 2.0;
  FracParams params;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> energy_history;
};

/// Minimizes J(e) = (1/r)·ρ_r(e) − ∫e. Without an initial guess, starts from a bump
/// rescaled to the minimizer along its ray.
TorsionSolution solve_torsion(const GradientOperator& op, const SeparablePreconditioner& pre,
                              double r, const TorsionOptions& opt = {},
                              const std::vector<double>* initial_interior = nullptr);

TorsionSolution solve_torsion(const GradientOperator& op, double r, const TorsionOptions& opt = {});

/// Solves M(ρ_r(u))·A_r u = load weakly with zero trace (M ≡ 1 when absent), starting
/// from 0. The load is given at interior nodes.
GridField solve_dirichlet(const GradientOperator& op, const SeparablePreconditioner& pre, double r,
                          std::vector<double> load, const std::optional<CoefficientFunction>& M = std::nullopt,
                          const TorsionOptions& opt = {});

/// x(T−x)·y(T−y) (or x(T−x) in 1D), zero on the boundary.
GridField boundary_bump(const Domain& d);

}  // namespace hk
