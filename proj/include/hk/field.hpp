#pragma once

// Tensor-product fields on [0,T]² (or [0,T] for the 1D reduction), per-axis fractional
// gradients, modulars and weak-form residuals against interior hat functions.
//
// Values are stored row-major over all nodes including the boundary: values[i*ny + j]
// at (x_i, y_j). In 1D, ny = 1 and there is no y-derivative.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hk/dense.hpp"
#include "hk/fracops.hpp"
#include "hk/grid.hpp"
#include "hk/psi.hpp"

namespace hk {

class Domain {
 public:
  static Domain square(double T, std::size_t n, double grading = 1.0);
  static Domain interval(double T, std::size_t n, double grading = 1.0);
  static Domain rectangle(Grid1D gx, Grid1D gy);
  static Domain line(Grid1D gx);

  int dim() const noexcept { return impl_->dim; }
  const Grid1D& gx() const noexcept { return impl_->gx; }
  /// The y-grid; in 1D a copy of gx that no operation reads.
  const Grid1D& gy() const noexcept { return impl_->gy; }
  std::size_t nx() const noexcept { return impl_->gx.size(); }
  std::size_t ny() const noexcept { return impl_->dim == 2 ? impl_->gy.size() : 1; }
  std::size_t size() const noexcept { return nx() * ny(); }
  double length() const noexcept { return impl_->gx.length(); }

  double x(std::size_t k) const noexcept { return impl_->gx[k / ny()]; }
  double y(std::size_t k) const noexcept { return dim() == 2 ? impl_->gy[k % ny()] : 0.0; }
  bool on_boundary(std::size_t k) const noexcept;

  /// Tensor trapezoid weights at every node.
  const std::vector<double>& weights() const noexcept { return impl_->weights; }
  /// Flat indices of the interior nodes, ascending.
  const std::vector<std::size_t>& interior() const noexcept { return impl_->interior; }

  std::vector<double> restrict_interior(std::span<const double> full) const;
  std::vector<double> extend(std::span<const double> interior_values) const;

  /// Distance from node k to the nearest edge of the domain.
  double boundary_distance(std::size_t k) const noexcept;

  friend bool operator==(const Domain& a, const Domain& b);

 private:
  struct Impl {
    int dim;
    Grid1D gx;
    Grid1D gy;
    std::vector<double> weights;
    std::vector<std::size_t> interior;
  };
  explicit Domain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static Domain make(int dim, Grid1D gx, Grid1D gy);

  std::shared_ptr<const Impl> impl_;
};

/// Nodal values on a domain. Admissible fields have zero trace.
struct GridField {
  Domain domain;
  std::vector<double> values;

  static GridField zero(const Domain& d);
  /// Samples fn(x, y) at every node; boundary values are forced to 0.
  static GridField sample(const Domain& d, const std::function<double(double, double)>& fn);
  static GridField from_interior(const Domain& d, std::span<const double> interior_values);

  std::vector<double> interior() const { return domain.restrict_interior(values); }
  bool has_zero_trace() const;
  double max() const;
  double min() const;
  double sup_norm() const;
};

/// Per-axis left derivatives on the staggered points: dx at (x-cell midpoint, y-node),
/// shape (nx−1)×ny; dy at (x-node, y-cell midpoint), shape nx×(ny−1).
struct FracGradient2D {
  std::vector<double> dx;
  std::vector<double> dy;  ///< empty in 1D
};

/// Interior hat functions: hat j is 1 at interior node j and 0 at every other node.
class TestCone {
 public:
  static TestCone interior(const Domain& d);
  /// A subset of the interior hats, given by flat node indices.
  static TestCone of_nodes(const Domain& d, std::vector<std::size_t> nodes);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t node(std::size_t j) const { return nodes_.at(j); }
  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }
  GridField hat(std::size_t j) const;
  const Domain& domain() const noexcept { return domain_; }

 private:
  TestCone(Domain d, std::vector<std::size_t> nodes) : domain_(std::move(d)), nodes_(std::move(nodes)) {}
  Domain domain_;
  std::vector<std::size_t> nodes_;
};

/// Per-axis left ψ-Hilfer gradient and the quantities built from it. Integrals of
/// gradient terms use the midpoint rule across cells and the trapezoid rule along the
/// other axis.
class GradientOperator {
 public:
  GradientOperator(Domain d, const FracParams& params, const PsiMap& psi);

  const Domain& domain() const noexcept { return domain_; }
  const FracParams& params() const noexcept { return params_; }
  const PsiMap& psi() const noexcept { return psi_; }

  const AxisOperator& left_x() const noexcept { return dlx_; }
  const AxisOperator& left_y() const noexcept { return dly_; }
  const AxisOperator& right_x() const noexcept { return drx_; }
  const AxisOperator& right_y() const noexcept { return dry_; }

  /// Quadrature weights matching the dx and dy arrays.
  const std::vector<double>& weights_dx() const noexcept { return wdx_; }
  const std::vector<double>& weights_dy() const noexcept { return wdy_; }
  std::size_t dx_size() const noexcept { return wdx_.size(); }
  std::size_t dy_size() const noexcept { return wdy_.size(); }

  FracGradient2D gradient(const GridField& u) const;
  /// Raw form; dx, dy sized dx_size(), dy_size(). dy is ignored in 1D.
  void gradient(std::span<const double> u, std::span<double> dx, std::span<double> dy) const;
  FracGradient2D gradient_raw(std::span<const double> u) const;

  /// Gradient averaged from the two adjacent cells onto every node (one cell at the
  /// boundary), shape nx×ny per axis.
  FracGradient2D nodal_gradient(const GridField& u) const;

  /// ∫(|Dx u|^r + |Dy u|^r) by tensor trapezoid.
  double modular(const GridField& u, double r) const;
  double modular(std::span<const double> u, double r) const;
  double modular_of_gradient(const FracGradient2D& g, double r) const;
  /// ‖u‖_{L^r} + ρ_r(u)^{1/r}.
  double norm(const GridField& u, double r) const;

  /// Σ_axes Dᵀ W |Du|^{r−2} Du on every node: the gradient of modular/r in nodal
  /// coordinates. Entry j equals ∫ |Du|^{r−2}Du·D(hat_j).
  std::vector<double> flux_divergence(std::span<const double> u, double r) const;
  std::vector<double> flux_divergence(const FracGradient2D& g, double r) const;

  /// ∫(|Dx u|^{r−2}Dx u·Dx v + |Dy u|^{r−2}Dy u·Dy v).
  double pairing(const GridField& u, const GridField& v, double r) const;

  /// residual_j = coeff·∫|Du|^{r−2}Du·D w_j − ∫ rhs·w_j for every hat in the cone.
  std::vector<double> weak_residual(const GridField& u, double r, double coeff,
                                    const GridField& rhs, const TestCone& cone) const;

  /// Strong form Σ_axes D_right(|D_left u|^{r−2} D_left u) on every node (boundary
  /// entries are extrapolated and carry no meaning).
  GridField strong_apply(const GridField& u, double r) const;

  /// Throws GridMismatchError unless f lives on this operator's domain.
  void check(const GridField& f) const;

 private:
  Domain domain_;
  FracParams params_;
  PsiMap psi_;
  AxisOperator dlx_, dly_, drx_, dry_;
  std::vector<double> wdx_, wdy_;
};

void check_exponent(double r);

}  // namespace hk
