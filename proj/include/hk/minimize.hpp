#pragma once

// Preconditioned Newton-CG descent for smooth convex objectives, with Armijo
// backtracking.

#include <span>
#include <vector>

namespace hk {

class SmoothConvexObjective {
 public:
  virtual ~SmoothConvexObjective() = default;
  virtual std::size_t size() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> g) const = 0;
  /// Prepare hessian_times/precondition at x (called once per outer iteration).
  virtual void linearize(std::span<const double> x) = 0;
  virtual void hessian_times(std::span<const double> v, std::span<double> out) const = 0;
  virtual void precondition(std::span<const double> r, std::span<double> z) const = 0;
};

struct DescentOptions {
  double tol = 1e-10;  ///< stop when max_j |g_j|/norm_weights_j ≤ tol·scale
  double scale = 1.0;
  int max_iter = 200;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 50;
  int cg_max_iter = 200;
  double cg_forcing = 1e-2;
  bool newton = true;  ///< false: plain preconditioned gradient steps
};

struct DescentResult {
  std::vector<double> x;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<double> energy_history;
};

/// norm_weights (one per unknown, positive) normalizes the gradient before the stopping
/// test; pass the lumped mass to test the strong-form residual.
DescentResult minimize(SmoothConvexObjective& obj, std::vector<double> x0,
                       std::span<const double> norm_weights, const DescentOptions& opt);

}  // namespace hk
