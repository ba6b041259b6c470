#pragma once

#include <functional>
#include <optional>
#include <string>

namespace hk {

/// Kirchhoff coefficient M: [0,∞) → (0,∞), continuous and nondecreasing, together with
/// its antiderivative M̂(t) = ∫₀ᵗ M.
class CoefficientFunction {
 public:
  using Fn = std::function<double(double)>;

  /// Generic M. M̂ is computed by adaptive Simpson quadrature (relative tolerance 1e−10)
  /// and M′ by central differences.
  CoefficientFunction(std::string name, Fn value);

  /// M(t) = a + b·t.
  static CoefficientFunction affine(double a, double b);
  /// M(t) = a.
  static CoefficientFunction constant(double a);
  /// M(t) = a + b·t/(1+t).
  static CoefficientFunction saturating(double a, double b);
  /// "affine:a,b", "const:a" or "saturating:a,b".
  static CoefficientFunction parse(const std::string& spec);

  double operator()(double t) const { return value_(t); }
  double derivative(double t) const;
  double antiderivative(double t) const;
  /// Lower bound m₀ = M(0) (M is nondecreasing).
  double lower_bound() const { return value_(0.0); }
  const std::string& name() const noexcept { return name_; }

  /// Throws HypothesisError unless M is positive and nondecreasing on samples of [0, t_max].
  void validate(double t_max = 1e6) const;

  /// Adaptive-Simpson M̂ regardless of any closed form (for tests).
  double antiderivative_quadrature(double t) const;

 private:
  std::string name_;
  Fn value_;
  std::optional<Fn> derivative_;
  std::optional<Fn> antiderivative_;
};

}  // namespace hk
