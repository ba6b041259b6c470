#pragma once

#include <string>
#include <vector>

#include "hk/grid.hpp"

namespace hk {

/// Kernel function ψ of the ψ-fractional operators: strictly increasing with ψ′ > 0
/// on the open interval.
class PsiMap {
 public:
  enum class Kind { identity, power, logarithmic };

  /// ψ(ξ) = ξ.
  static PsiMap identity() { return PsiMap(Kind::identity, 1.0); }
  /// ψ(ξ) = ξ^γ, γ > 0.
  static PsiMap power(double gamma);
  /// ψ(ξ) = log(ξ + shift), shift > 0.
  static PsiMap logarithmic(double shift = 1.0);

  double operator()(double xi) const;
  double derivative(double xi) const;

  Kind kind() const noexcept { return kind_; }
  /// γ for power, the shift for logarithmic, 1 for identity.
  double parameter() const noexcept { return param_; }
  std::string name() const;

  /// ψ sampled on every node of g.
  std::vector<double> sample(const Grid1D& g) const;

  /// Throws KernelDomainError unless ψ is strictly increasing over the nodes of g and
  /// ψ′ > 0 at every interior node.
  void validate_on(const Grid1D& g) const;

  friend bool operator==(const PsiMap& a, const PsiMap& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_;
  }

 private:
  PsiMap(Kind k, double p) : kind_(k), param_(p) {}

  Kind kind_;
  double param_;
};

}  // namespace hk
