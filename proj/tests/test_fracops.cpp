#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hk/errors.hpp"
#include "hk/fracops.hpp"
#include "hk/identities.hpp"

using namespace hk;

namespace {

std::vector<double> sample(const Grid1D& g, auto&& fn) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = fn(g[i]);
  return v;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double interior_sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sup_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Closed-form power rule: I^μ (ψ−ψ(0))^{δ−1} = Γ(δ)/Γ(δ+μ) (ψ−ψ(0))^{δ+μ−1}.
double power_rule_relative_error(const PsiMap& psi, std::size_t n, double mu, double delta) {
  const auto g = Grid1D::uniform(1.0, n);
  const double p0 = psi(0.0);
  const auto f = sample(g, [&](double x) { return std::pow(psi(x) - p0, delta - 1.0); });
  const auto exact = sample(g, [&](double x) {
    return std::tgamma(delta) / std::tgamma(delta + mu) * std::pow(psi(x) - p0, delta + mu - 1.0);
  });
  const auto num = rl_integral_left(f, mu, psi, g);
  return sup_diff(num, exact) / sup_abs(exact);
}

}  // namespace

TEST_CASE("rl_integral_left: zero input maps to zero") {
  const auto g = Grid1D::uniform(1.0, 40);
  const std::vector<double> f(g.size(), 0.0);
  for (double mu : {0.2, 0.5, 1.0}) {
    for (const auto& psi : {PsiMap::identity(), PsiMap::power(2.0), PsiMap::logarithmic()}) {
      const auto F = rl_integral_left(f, mu, psi, g);
      CHECK(sup_abs(F) == 0.0);
    }
  }
}

TEST_CASE("rl_integral_left: classical integral at mu = 1") {
  const auto g = Grid1D::uniform(1.0, 64);
  const std::vector<double> one(g.size(), 1.0);
  const auto F = rl_integral_left(one, 1.0, PsiMap::identity(), g);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(F[i] == doctest::Approx(g[i]).epsilon(1e-13));
}

TEST_CASE("rl_integral_left: half integral of one is 1/Gamma(1.5) at xi = 1") {
  const auto g = Grid1D::uniform(1.0, 512);
  const std::vector<double> one(g.size(), 1.0);
  const auto F = rl_integral_left(one, 0.5, PsiMap::identity(), g);
  CHECK(std::abs(F.back() - 1.0 / std::tgamma(1.5)) < 1e-4);
  CHECK(F.back() == doctest::Approx(1.1283791670955126).epsilon(1e-10));
}

TEST_CASE("rl_integral_right: mirror of the left integral") {
  const auto g = Grid1D::uniform(1.0, 64);
  const std::vector<double> one(g.size(), 1.0);
  const auto F = rl_integral_right(one, 1.0, PsiMap::identity(), g);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(F[i] == doctest::Approx(1.0 - g[i]).epsilon(1e-13));

  const std::vector<double> zero(g.size(), 0.0);
  CHECK(sup_abs(rl_integral_right(zero, 0.3, PsiMap::identity(), g)) == 0.0);

  // right(f)(ξ) = left(f∘ρ)(T−ξ), ρ(s) = T − s
  for (double mu : {0.3, 0.7}) {
    const auto f = sample(g, [](double x) { return std::exp(x) * std::sin(3.0 * x); });
    const auto fr = sample(g, [](double x) { return std::exp(1.0 - x) * std::sin(3.0 * (1.0 - x)); });
    const auto right = rl_integral_right(f, mu, PsiMap::identity(), g);
    auto left = rl_integral_left(fr, mu, PsiMap::identity(), g);
    std::reverse(left.begin(), left.end());
    CHECK(sup_diff(right, left) < 1e-10);
  }
}

TEST_CASE("rl_integral: parameter and kernel-domain errors") {
  const auto g = Grid1D::uniform(1.0, 16);
  const std::vector<double> f(g.size(), 1.0);
  CHECK_THROWS_AS(rl_integral_left(f, 0.0, PsiMap::identity(), g), ParameterError);
  CHECK_THROWS_AS(rl_integral_left(f, 1.5, PsiMap::identity(), g), ParameterError);
  CHECK_THROWS_AS(rl_integral_right(f, -0.1, PsiMap::identity(), g), ParameterError);
  const std::vector<double> decreasing{0.0, 0.5, 0.4, 1.0};
  CHECK_THROWS_AS(fracops::left_integral_matrix(decreasing, 0.5), KernelDomainError);
  const std::vector<double> short_f(5, 1.0);
  CHECK_THROWS_AS(rl_integral_left(short_f, 0.5, PsiMap::identity(), g), SizeError);
}

TEST_CASE("power rule for identity, power and logarithmic psi") {
  for (const auto& psi : {PsiMap::identity(), PsiMap::power(2.0), PsiMap::logarithmic()}) {
    for (double mu : {0.3, 0.5, 0.8}) {
      for (double delta : {2.0, 2.5, 3.0}) {
        CAPTURE(psi.name());
        CAPTURE(mu);
        CAPTURE(delta);
        CHECK(power_rule_relative_error(psi, 512, mu, delta) < 1e-4);
      }
    }
  }
  // Linear in ψ: the product rule is exact.
  CHECK(power_rule_relative_error(PsiMap::power(2.0), 64, 0.4, 2.0) < 1e-12);
}

TEST_CASE("semigroup I^a I^b = I^{a+b}, order at least 1.5") {
  const double a = 0.4, b = 0.35;
  for (const auto& psi : {PsiMap::identity(), PsiMap::power(2.0), PsiMap::logarithmic()}) {
    std::vector<double> errs;
    for (std::size_t n : {63u, 127u, 255u, 511u}) {
      const auto g = Grid1D::uniform(1.0, n);
      const auto f = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
      const auto two_step = rl_integral_left(rl_integral_left(f, b, psi, g), a, psi, g);
      const auto one_step = rl_integral_left(f, a + b, psi, g);
      errs.push_back(sup_diff(two_step, one_step) / sup_abs(one_step));
    }
    CAPTURE(psi.name());
    CHECK(errs.back() < 1e-3);
    const double order = std::log2(errs[errs.size() - 2] / errs.back());
    CAPTURE(order);
    CHECK(order >= 1.5);
  }
}

TEST_CASE("integral operators are linear") {
  const auto g = Grid1D::graded(2.0, 50, 1.5);
  const auto f = sample(g, [](double x) { return std::sin(x); });
  const auto h = sample(g, [](double x) { return x * x - 1.0; });
  std::vector<double> comb(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) comb[i] = 2.5 * f[i] - 0.75 * h[i];
  const auto psi = PsiMap::logarithmic(0.5);
  const auto If = rl_integral_left(f, 0.6, psi, g);
  const auto Ih = rl_integral_left(h, 0.6, psi, g);
  const auto Ic = rl_integral_left(comb, 0.6, psi, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(Ic[i] - (2.5 * If[i] - 0.75 * Ih[i])) < 1e-13);
}

TEST_CASE("hilfer_deriv_left: zero, constants and sizes") {
  const auto g = Grid1D::uniform(1.0, 32);
  const std::vector<double> zero(g.size(), 0.0);
  const FracParams p{0.7, 0.3, 2.0};
  CHECK(sup_abs(hilfer_deriv_left(zero, p, PsiMap::identity(), g)) == 0.0);
  CHECK(sup_abs(hilfer_deriv_right(zero, p, PsiMap::identity(), g)) == 0.0);

  const std::vector<double> c(g.size(), 3.0);
  const FracParams caputo{0.7, 1.0, 2.0};
  CHECK(sup_abs(hilfer_deriv_left(c, caputo, PsiMap::power(2.0), g)) < 1e-9);

  const auto tiny = Grid1D::uniform(1.0, 2);
  const std::vector<double> f(tiny.size(), 0.0);
  CHECK_THROWS_AS(hilfer_deriv_left(f, p, PsiMap::identity(), tiny), SizeError);
}

TEST_CASE("hilfer_deriv_left is a left inverse of the order-alpha integral") {
  const FracParams p{0.6, 0.4, 2.0};
  std::vector<double> errs;
  for (std::size_t n : {63u, 127u, 255u, 511u}) {
    const auto g = Grid1D::uniform(1.0, n);
    const auto f = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
    const auto If = rl_integral_left(f, p.alpha, PsiMap::identity(), g);
    errs.push_back(sup_diff(hilfer_deriv_left(If, p, PsiMap::identity(), g), f));
  }
  CHECK(errs.back() <= 1e-2);
  for (std::size_t k = 1; k < errs.size(); ++k) CHECK(errs[k] < errs[k - 1]);
}

TEST_CASE("hilfer_deriv_right: classical limit and reflection") {
  const auto g = Grid1D::uniform(1.0, 512);
  const auto f = sample(g, [](double x) { return x * (1.0 - x); });
  const FracParams near_one{0.999, 0.5, 2.0};
  const auto d = hilfer_deriv_right(f, near_one, PsiMap::identity(), g);
  const auto expected = sample(g, [](double x) { return -(1.0 - 2.0 * x); });
  CHECK(interior_sup_diff(d, expected) < 2e-2);

  const FracParams p{0.65, 0.3, 2.0};
  const auto h = sample(g, [](double x) { return std::sin(2.0 * x) * x * (1.0 - x); });
  const auto hr = sample(g, [](double x) { return std::sin(2.0 * (1.0 - x)) * (1.0 - x) * x; });
  const auto right = hilfer_deriv_right(h, p, PsiMap::identity(), g);
  auto left = hilfer_deriv_left(hr, p, PsiMap::identity(), g);
  std::reverse(left.begin(), left.end());
  CHECK(sup_diff(right, left) < 1e-8);
}

TEST_CASE("classical reduction of the left derivative") {
  const auto g = Grid1D::uniform(1.0, 512);
  for (double beta : {0.0, 0.5, 1.0}) {
    const FracParams p{0.999, beta, 2.0};
    const auto f = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
    const auto d = hilfer_deriv_left(f, p, PsiMap::identity(), g);
    const auto expected =
        sample(g, [](double x) { return std::numbers::pi * std::cos(std::numbers::pi * x); });
    CAPTURE(beta);
    CHECK(interior_sup_diff(d, expected) <= 2e-2);
  }
}

TEST_CASE("boundary value of the Caputo-type derivative vanishes") {
  // outer integral of positive order is zero at the origin
  const auto g = Grid1D::uniform(1.0, 64);
  const auto f = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
  const auto d = hilfer_deriv_left(f, FracParams{0.9, 1.0, 2.0}, PsiMap::identity(), g);
  CHECK(d[0] == 0.0);
}

TEST_CASE("operator matrices compose exactly") {
  const auto g = Grid1D::graded(1.0, 40, 1.3);
  const FracParams p{0.7, 0.4, 2.0};
  const auto ops = OperatorMatrices1D::build(g, PsiMap::power(1.5), p);
  CHECK((ops.D_left - ops.left_outer * ops.left_W * ops.left_inner).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((ops.D_right - ops.right_outer * ops.right_W * ops.right_inner).cwiseAbs().maxCoeff() < 1e-9);
  // lower/upper triangular integral matrices
  for (Eigen::Index i = 0; i < ops.I_left.rows(); ++i)
    for (Eigen::Index j = i + 1; j < ops.I_left.cols(); ++j) {
      CHECK(ops.I_left(i, j) == 0.0);
      CHECK(ops.I_right(j, i) == 0.0);
    }
}

TEST_CASE("psi maps") {
  CHECK(PsiMap::identity()(0.3) == 0.3);
  CHECK(PsiMap::identity().derivative(0.3) == 1.0);
  CHECK(PsiMap::power(2.0).derivative(0.5) == doctest::Approx(1.0));
  CHECK(PsiMap::logarithmic(1.0)(0.0) == 0.0);
  CHECK_THROWS_AS(PsiMap::power(0.0), ParameterError);
  CHECK_THROWS_AS(PsiMap::logarithmic(-1.0), ParameterError);
  const auto g = Grid1D::uniform(1.0, 20);
  for (const auto& psi : {PsiMap::identity(), PsiMap::power(0.5), PsiMap::power(3.0), PsiMap::logarithmic(2.0)}) {
    CHECK_NOTHROW(psi.validate_on(g));
    for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(psi.derivative(g[i]) > 0.0);
  }
}

TEST_CASE("frac params validation") {
  CHECK_NOTHROW(FracParams{0.75, 0.5, 3.0}.validate());
  CHECK_THROWS_AS((FracParams{0.3, 0.5, 2.0}.validate()), ParameterError);
  CHECK_THROWS_AS((FracParams{0.8, 1.5, 2.0}.validate()), ParameterError);
  CHECK_THROWS_AS((FracParams{0.8, 0.5, 1.0}.validate()), ParameterError);
  CHECK_THROWS_AS((FracParams{1.0, 0.5, 2.0}.validate()), ParameterError);
}

TEST_CASE("grids") {
  const auto g = Grid1D::graded(2.0, 9, 2.0);
  CHECK(g[0] == 0.0);
  CHECK(g[g.size() - 1] == 2.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  double s = 0.0;
  for (double w : g.trapezoid_weights()) s += w;
  CHECK(s == doctest::Approx(2.0));
  CHECK(Grid1D::uniform(1.0, 10).symmetric());
  CHECK_FALSE(g.symmetric());
  CHECK_THROWS_AS(Grid1D::from_nodes({0.0, 0.5, 0.5, 1.0}), ParameterError);
  CHECK_THROWS_AS(Grid1D::uniform(-1.0, 4), ParameterError);
}

TEST_CASE("identity suite at desk scale") {
  const auto rep = operator_identity_suite(512);
  CHECK(rep.checks.size() == 9);
  for (const auto& c : rep.checks) {
    CAPTURE(c.identity);
    CAPTURE(c.psi);
    CAPTURE(c.error);
    CHECK(c.ok);
  }
  CHECK(rep.ok);
}
