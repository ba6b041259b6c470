#pragma once

// Discrete ψ-Riemann–Liouville integrals and ψ-Hilfer derivatives on a 1D grid.
//
// Integrals use a product rule in the variable u = ψ(ξ): the integrand is replaced by
// its piecewise-linear interpolant in u and the weakly singular kernel
// (ψ(ξ) − u)^{μ−1}/Γ(μ) is integrated exactly against it, including the singular last
// cell. The derivative factor (1/ψ′)·d/dξ = d/dψ uses 3-point Lagrange differences in u.

#include <span>
#include <vector>

#include "hk/dense.hpp"
#include "hk/grid.hpp"
#include "hk/psi.hpp"

namespace hk {

/// Order α and type β of the ψ-Hilfer operators, with the exponent r they are paired with.
struct FracParams {
  double alpha = 0.75;
  double beta = 0.5;
  double r = 2.0;

  /// Throws ParameterError unless 1/r < α < 1, 0 ≤ β ≤ 1 and r > 1.
  void validate() const;
  /// Same check against another exponent.
  void validate_for(double exponent) const;

  double inner_order() const noexcept { return (1.0 - beta) * (1.0 - alpha); }
  double outer_order() const noexcept { return beta * (1.0 - alpha); }
};

namespace fracops {

/// Left ψ-RL integral matrix of order mu ∈ [0,1] over the ψ-values of the nodes
/// (mu = 0 gives the identity). Lower triangular.
DenseMatrix left_integral_matrix(std::span<const double> psi_nodes, double mu);

/// 3-point d/dψ on the nodes: central inside, second-order one-sided at both ends.
DenseMatrix psi_derivative_matrix(std::span<const double> psi_nodes);

/// The left-sided operators on the reflected grid, index-flipped: right-sided operators.
DenseMatrix flip(const DenseMatrix& m);

/// Left integral of order mu of a cellwise-constant density (cell c spans nodes c, c+1),
/// evaluated exactly at the ψ-values `psi_points`. mu = 0 needs one point per cell and
/// gives the identity.
DenseMatrix left_integral_cells_matrix(std::span<const double> psi_nodes,
                                       std::span<const double> psi_points, double mu);

/// Nodes → cells: (F_{c+1} − F_c)/(ψ_{c+1} − ψ_c).
DenseMatrix forward_difference_matrix(std::span<const double> psi_nodes);

/// Cells → nodes: (G_i − G_{i−1})/(ψ(m_i) − ψ(m_{i−1})) at interior nodes, linear
/// extrapolation at the two end nodes.
DenseMatrix midpoint_difference_matrix(std::span<const double> psi_nodes,
                                       std::span<const double> psi_mid);

}  // namespace fracops

/// Dense operator matrices on one axis for fixed (α, β, ψ, grid).
struct OperatorMatrices1D {
  DenseMatrix I_left;   ///< left integral of order α
  DenseMatrix I_right;  ///< right integral of order α
  DenseMatrix D_left;   ///< left ψ-Hilfer derivative
  DenseMatrix D_right;  ///< right ψ-Hilfer derivative (includes the minus sign)

  // Factors of the compositions D = outer · W · inner.
  DenseMatrix left_outer, left_W, left_inner;
  DenseMatrix right_outer, right_W, right_inner;

  static OperatorMatrices1D build(const Grid1D& g, const PsiMap& psi, const FracParams& params);
};

/// Staggered pair used by the field energy. The left derivative maps nodal values to cell
/// midpoints: inner integral of the piecewise-linear interpolant, forward ψ-difference,
/// outer integral of the resulting cellwise-constant function. The right derivative maps
/// cellwise-constant data back to nodes. For α → 1, ψ = id this is the P1 finite element
/// gradient, whose only null vector under zero trace is 0.
struct StaggeredOperators1D {
  DenseMatrix D_left;   ///< cells × nodes
  DenseMatrix D_right;  ///< nodes × cells (includes the minus sign)
  std::vector<double> midpoints;
  std::vector<double> widths;

  static StaggeredOperators1D build(const Grid1D& g, const PsiMap& psi, const FracParams& params);
};

/// Left ψ-Hilfer derivative at the cell midpoints.
std::vector<double> hilfer_deriv_left_cells(std::span<const double> f, const FracParams& params,
                                            const PsiMap& psi, const Grid1D& g);

/// (1/Γ(μ)) ∫₀^ξ ψ′(s)(ψ(ξ)−ψ(s))^{μ−1} f(s) ds at every node.
std::vector<double> rl_integral_left(std::span<const double> f, double mu, const PsiMap& psi,
                                     const Grid1D& g);

/// (1/Γ(μ)) ∫_ξ^T ψ′(s)(ψ(s)−ψ(ξ))^{μ−1} f(s) ds at every node.
std::vector<double> rl_integral_right(std::span<const double> f, double mu, const PsiMap& psi,
                                      const Grid1D& g);

/// I^{β(1−α)} (d/dψ) I^{(1−β)(1−α)} f at every node.
std::vector<double> hilfer_deriv_left(std::span<const double> f, const FracParams& params,
                                      const PsiMap& psi, const Grid1D& g);

/// I_T^{β(1−α)} (−d/dψ) I_T^{(1−β)(1−α)} f at every node.
std::vector<double> hilfer_deriv_right(std::span<const double> f, const FracParams& params,
                                       const PsiMap& psi, const Grid1D& g);

}  // namespace hk
