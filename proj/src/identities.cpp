#include "hk/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hk/fracops.hpp"

namespace hk {

namespace {

double relative_sup(const std::vector<double>& num, const std::vector<double>& exact) {
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    err = std::max(err, std::abs(num[i] - exact[i]));
    ref = std::max(ref, std::abs(exact[i]));
  }
  return err / ref;
}

std::vector<double> psi_sine(const PsiMap& psi, const Grid1D& g) {
  const double p0 = psi(0.0), span = psi(g.length()) - p0;
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(std::numbers::pi * (psi(g[i]) - p0) / span);
  return f;
}

}  // namespace

IdentityReport operator_identity_suite(std::size_t n) {
  IdentityReport rep;
  rep.n = n;
  const auto g = Grid1D::uniform(1.0, n);
  for (const auto& psi : {PsiMap::identity(), PsiMap::power(2.0), PsiMap::logarithmic()}) {
    const double p0 = psi(0.0);

    double power = 0.0;
    for (double mu : {0.3, 0.5, 0.8})
      for (double delta : {2.0, 2.5, 3.0}) {
        std::vector<double> f(g.size()), exact(g.size());
        const double c = std::tgamma(delta) / std::tgamma(delta + mu);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double s = psi(g[i]) - p0;
          f[i] = std::pow(s, delta - 1.0);
          exact[i] = c * std::pow(s, delta + mu - 1.0);
        }
        power = std::max(power, relative_sup(rl_integral_left(f, mu, psi, g), exact));
      }
    rep.checks.push_back({"power_rule", psi.name(), power, 1e-4, power <= 1e-4});

    const auto f = psi_sine(psi, g);
    const auto two = rl_integral_left(rl_integral_left(f, 0.35, psi, g), 0.4, psi, g);
    const double semi = relative_sup(two, rl_integral_left(f, 0.75, psi, g));
    rep.checks.push_back({"semigroup", psi.name(), semi, 1e-3, semi <= 1e-3});

    double inverse = 0.0;
    const auto If = rl_integral_left(f, 0.6, psi, g);
    for (double beta : {0.0, 0.4, 1.0})
      inverse = std::max(inverse, relative_sup(hilfer_deriv_left(If, FracParams{0.6, beta, 2.0}, psi, g), f));
    rep.checks.push_back({"left_inverse", psi.name(), inverse, 1e-3, inverse <= 1e-3});
  }
  rep.ok = std::all_of(rep.checks.begin(), rep.checks.end(), [](const IdentityCheck& c) { return c.ok; });
  return rep;
}

}  // namespace hk
