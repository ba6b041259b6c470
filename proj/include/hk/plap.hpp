#pragma once

// The fractional r-Laplacian A_r u = Σ_axes D_right(|D_left u|^{r−2} D_left u), oriented so
// that A_r is monotone (A_r → −Δ_r as α → 1), the energy Ξ and the comparison check.

#include <string>
#include <vector>

#include "hk/coeff.hpp"
#include "hk/field.hpp"

namespace hk {

class PLapOperator {
 public:
  PLapOperator(const GradientOperator& op, double r);

  double r() const noexcept { return r_; }
  const GradientOperator& gradient_operator() const noexcept { return op_; }

  /// Strong form on every node.
  GridField apply(const GridField& u) const;

 private:
  const GradientOperator& op_;
  double r_;
};

/// Ξ(u) = (1/r)·M̂(ρ_r(u)).
double energy_Xi(const GradientOperator& op, const GridField& u, double r, const CoefficientFunction& M);

/// Ξ′(u)v = M(ρ_r(u))·∫|Du|^{r−2}Du·Dv.
double xi_derivative_pairing(const GradientOperator& op, const GridField& u, const GridField& v, double r,
                             const CoefficientFunction& M);

struct ComparisonResult {
  enum class Status { ordered, violation, hypothesis_not_met };
  Status status = Status::ordered;
  /// Largest Ξ′(u1)w_j − Ξ′(u2)w_j over the cone (≤ tol when the hypothesis holds).
  double hypothesis_margin = 0.0;
  std::size_t worst_test = 0;
  /// Nodes with u1 > u2 + tol.
  std::vector<std::size_t> violating_nodes;
  /// ⟨Ξ′(u1) − Ξ′(u2), (u1 − u2)⁺⟩
  double positive_part_pairing = 0.0;

  std::string status_name() const;
};

/// Checks the hypothesis Ξ′(u1)w ≤ Ξ′(u2)w for every hat w in the cone (relative tolerance
/// tol), then u1 ≤ u2 + tol·max(|u1|,|u2|) nodewise.
ComparisonResult comparison_check(const GradientOperator& op, const GridField& u1, const GridField& u2,
                                  double r, const CoefficientFunction& M, const TestCone& cone,
                                  double tol = 1e-8);

}  // namespace hk
