#pragma once

// Discrete checks of the classical identities of the ψ-fractional integral and the
// Hilfer derivative, used by the ops-test subcommand and the acceptance binary.

#include <cstddef>
#include <string>
#include <vector>

namespace hk {

struct IdentityCheck {
  std::string identity;  ///< "power_rule", "semigroup" or "left_inverse"
  std::string psi;
  double error = 0.0;  ///< worst relative sup-norm error over the parameter sweep
  double tolerance = 0.0;
  bool ok = false;
};

struct IdentityReport {
  bool ok = false;
  std::size_t n = 0;
  std::vector<IdentityCheck> checks;
};

/// Power rule I^μ(ψ−ψ(0))^{δ−1} = Γ(δ)/Γ(δ+μ)(ψ−ψ(0))^{δ+μ−1} for μ ∈ {0.3, 0.5, 0.8},
/// δ ∈ {2, 2.5, 3} (tolerance 1e−4); semigroup I^{0.4}I^{0.35} = I^{0.75} (1e−3); left
/// inverse D^{0.6,β}I^{0.6}f = f for β ∈ {0, 0.4, 1} (1e−3). Test functions are smooth in
/// the ψ variable, f = sin(π(ψ−ψ(0))/(ψ(1)−ψ(0))). ψ ranges over identity, ξ² and log(1+ξ).
IdentityReport operator_identity_suite(std::size_t n = 512);

}  // namespace hk
