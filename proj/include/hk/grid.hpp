#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hk {

/// Nodes 0 = ξ₀ < ξ₁ < … < ξ_{n+1} = T on one axis.
class Grid1D {
 public:
  /// Uniform grid with n interior nodes.
  static Grid1D uniform(double T, std::size_t n);

  /// Graded grid ξ_i = T·(i/(n+1))^g; g = 1 is uniform, g > 1 clusters nodes near 0.
  static Grid1D graded(double T, std::size_t n, double g);

  /// Arbitrary node set; must start at exactly 0 and be strictly increasing.
  static Grid1D from_nodes(std::vector<double> nodes);

  double length() const noexcept { return nodes_.back(); }
  std::size_t interior() const noexcept { return nodes_.size() - 2; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double grading() const noexcept { return grading_; }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }
  std::span<const double> nodes() const noexcept { return nodes_; }

  /// Composite trapezoid weights, one per node (boundary nodes get half cells).
  std::vector<double> trapezoid_weights() const;

  /// True when ξ_i + ξ_{n+1-i} = T at every node.
  bool symmetric(double tol = 1e-14) const;

  friend bool operator==(const Grid1D& a, const Grid1D& b) { return a.nodes_ == b.nodes_; }

 private:
  Grid1D(std::vector<double> nodes, double grading);

  std::vector<double> nodes_;
  double grading_ = 1.0;
};

}  // namespace hk
