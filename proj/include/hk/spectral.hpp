#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hk/field.hpp"
#include "hk/precond.hpp"

namespace hk {

struct EigenOptions {
  double tol = 1e-8;         ///< relative change of the Rayleigh quotient
  int max_iter = 300;
  double inner_tol = 1e-11;  ///< relative strong residual of each inverse step
  int clip_iterations = 3;
  std::uint64_t seed = 1;
};

/// First eigenpair of A_r u = λ|u|^{r−2}u with zero trace, θ > 0 and sup θ = 1.
struct EigenPair {
  double lambda1 = 0.0;
  GridField theta;
  double r = 2.0;
  int iterations = 0;
  std::vector<double> quotient_history;
  /// sup over interior nodes of |a(θ) − λ·mass·θ^{r−1}|/mass
  double residual = 0.0;
};

/// ρ_r(u) / ∫|u|^r.
double rayleigh_quotient(const GradientOperator& op, const GridField& u, double r);

EigenPair first_eigenpair(const GradientOperator& op, const SeparablePreconditioner& pre, double r,
                          const EigenOptions& opt = {});
EigenPair first_eigenpair(const GradientOperator& op, double r, const EigenOptions& opt = {});

/// Strip Ω_δ = interior nodes within distance δ of the boundary. m is the least gap
/// |Dx θ|^r + |Dy θ|^r − λθ^r over the strip, σ the least θ off the strip.
struct BarrierConstants {
  bool ok = false;
  double m = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  std::vector<char> strip;  ///< per node, 1 on Ω_δ
  std::string reason;
};

/// Failure (ok = false) when m ≤ 0. Throws ParameterError unless 0 < δ < T/2 and some
/// interior node lies off the strip.
BarrierConstants barrier_constants(const GradientOperator& op, const EigenPair& pair, double delta);

/// First δ in `candidates` with m > 0; the last failure if none works.
BarrierConstants search_barrier(const GradientOperator& op, const EigenPair& pair,
                                const std::vector<double>& candidates);

/// {0.05T, 0.1T, 0.2T}
std::vector<double> default_delta_candidates(double T);

/// Per-node gap |Dx θ|^r + |Dy θ|^r − λθ^r.
std::vector<double> barrier_gap(const GradientOperator& op, const EigenPair& pair);

}  // namespace hk
