#include "hk/grid.hpp"

#include <cmath>
#include <string>

#include "hk/errors.hpp"

namespace hk {

Grid1D::Grid1D(std::vector<double> nodes, double grading)
    : nodes_(std::move(nodes)), grading_(grading) {}

Grid1D Grid1D::uniform(double T, std::size_t n) { return graded(T, n, 1.0); }

Grid1D Grid1D::graded(double T, std::size_t n, double g) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("grid length T must be positive");
  if (n < 1) throw SizeError("grid needs at least one interior node");
  if (!(g > 0.0)) throw ParameterError("grading exponent must be positive");
  std::vector<double> nodes(n + 2);
  const double N = static_cast<double>(n + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double s = static_cast<double>(i) / N;
    nodes[i] = (g == 1.0) ? T * s : T * std::pow(s, g);
  }
  nodes.front() = 0.0;
  nodes.back() = T;
  return Grid1D(std::move(nodes), g);
}

Grid1D Grid1D::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 3) throw SizeError("grid needs at least one interior node");
  if (nodes.front() != 0.0) throw ParameterError("grid must start at 0");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1]))
      throw ParameterError("grid nodes must be strictly increasing (index " + std::to_string(i) + ")");
  }
  return Grid1D(std::move(nodes), 1.0);
}

std::vector<double> Grid1D::trapezoid_weights() const {
  std::vector<double> w(nodes_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const double h = nodes_[i + 1] - nodes_[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

bool Grid1D::symmetric(double tol) const {
  const double T = length();
  const std::size_t N = nodes_.size();
  for (std::size_t i = 0; i < N; ++i) {
    if (std::abs(nodes_[i] + nodes_[N - 1 - i] - T) > tol * T) return false;
  }
  return true;
}

}  // namespace hk
