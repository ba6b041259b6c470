#pragma once

// E(u) = (1/r)·M̂(ρ_r(u)) + ∫G(u) − ∫b·u over interior nodal values, with ρ_r the
// modular, M̂ the antiderivative of the Kirchhoff coefficient and G(s) = λ|s|^e/e the
// antiderivative of the auxiliary monotone term g(s) = λ|s|^{e−2}s. Its stationarity
// condition is M(ρ(u))·a(u) + mass·g(u) = mass·b.

#include <optional>
#include <span>
#include <vector>

#include "hk/coeff.hpp"
#include "hk/field.hpp"
#include "hk/minimize.hpp"
#include "hk/precond.hpp"

namespace hk {

struct EnergyTerms {
  double r = 2.0;
  std::optional<CoefficientFunction> M;  ///< empty: M ≡ 1
  std::vector<double> load;              ///< b at interior nodes; empty: b ≡ 0
  double g_lambda = 0.0;
  double g_exponent = 2.0;
};

class DirichletEnergy final : public SmoothConvexObjective {
 public:
  DirichletEnergy(const GradientOperator& op, const SeparablePreconditioner& pre, EnergyTerms terms);

  std::size_t size() const override { return mass_.size(); }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> g) const override;
  void linearize(std::span<const double> x) override;
  void hessian_times(std::span<const double> v, std::span<double> out) const override;
  void precondition(std::span<const double> r, std::span<double> z) const override;

  const std::vector<double>& mass() const noexcept { return mass_; }
  const EnergyTerms& terms() const noexcept { return terms_; }
  double coefficient(double rho) const { return terms_.M ? (*terms_.M)(rho) : 1.0; }
  double coefficient_derivative(double rho) const { return terms_.M ? terms_.M->derivative(rho) : 0.0; }
  double coefficient_antiderivative(double rho) const {
    return terms_.M ? terms_.M->antiderivative(rho) : rho;
  }

 private:
  double g(double s) const;
  double G(double s) const;
  double g_prime(double s) const;

  const GradientOperator& op_;
  const SeparablePreconditioner& pre_;
  EnergyTerms terms_;
  std::vector<double> mass_;

  // state of the last linearize()
  std::vector<double> cx_, cy_;  // W·(r−1)|Du|^{r−2}, regularized
  std::vector<double> a_;        // interior a(u)
  std::vector<double> gp_;       // mass·g′(u)
  double M_ = 1.0, Mp_ = 0.0;
  double pre_s_ = 1.0, pre_c_ = 0.0;
};

}  // namespace hk
