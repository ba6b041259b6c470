#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hk/errors.hpp"
#include "hk/plap.hpp"
#include "hk/precond.hpp"
#include "hk/torsion.hpp"

using namespace hk;
using std::numbers::pi;

namespace {

GridField random_field(const Domain& d, std::mt19937_64& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> U(-amp, amp);
  GridField f = GridField::zero(d);
  for (std::size_t k : d.interior()) f.values[k] = U(rng);
  return f;
}

// Smooth random field: a few low sine modes with random coefficients.
GridField smooth_random(const Domain& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double c[3][3];
  for (auto& row : c)
    for (double& v : row) v = U(rng);
  return GridField::sample(d, [&](double x, double y) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += c[i][j] * std::sin((i + 1) * pi * x) * std::sin((j + 1) * pi * y);
    return s;
  });
}

GridField scaled(GridField f, double c) {
  for (double& v : f.values) v *= c;
  return f;
}

GridField minus(GridField a, const GridField& b) {
  for (std::size_t k = 0; k < a.values.size(); ++k) a.values[k] -= b.values[k];
  return a;
}

const FracParams kFrac{0.75, 0.5, 2.0};

}  // namespace

TEST_CASE("apply: zero and homogeneity") {
  const auto d = Domain::square(1.0, 12);
  const GradientOperator op(d, kFrac, PsiMap::identity());
  const PLapOperator A(op, 3.0);
  const auto z = A.apply(GridField::zero(d));
  for (double v : z.values) CHECK(v == 0.0);

  std::mt19937_64 rng(3);
  const auto u = random_field(d, rng);
  const auto a1 = A.apply(u);
  const auto a2 = A.apply(scaled(u, 2.0));
  double err = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < a1.values.size(); ++k) {
    err = std::max(err, std::abs(a2.values[k] - 4.0 * a1.values[k]));
    ref = std::max(ref, std::abs(a1.values[k]));
  }
  CHECK(err <= 1e-10 * 4.0 * ref);
  CHECK_THROWS_AS(PLapOperator(op, 1.0), ParameterError);
}

TEST_CASE("apply: classical Laplacian limit") {
  const auto d = Domain::square(1.0, 256);
  const GradientOperator op(d, FracParams{0.999, 0.5, 2.0}, PsiMap::identity());
  const PLapOperator A(op, 2.0);
  const auto u = GridField::sample(d, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  const auto au = A.apply(u);
  // The α < 1 operator differs from −Δ by about (1−α)π/dist(x, ∂Ω) next to the edge, so the
  // sup-norm comparison excludes a layer of width 0.05; the L² comparison covers every node.
  double err = 0.0, edge = 0.0, l2 = 0.0, l2ref = 0.0;
  for (std::size_t k : d.interior()) {
    const double e = std::abs(au.values[k] - 2.0 * pi * pi * u.values[k]);
    double& worst = d.boundary_distance(k) >= 0.05 ? err : edge;
    worst = std::max(worst, e);
    l2 += d.weights()[k] * e * e;
    l2ref += d.weights()[k] * std::pow(2.0 * pi * pi * u.values[k], 2);
  }
  CHECK(err <= 0.03 * 2.0 * pi * pi);
  CHECK(std::sqrt(l2 / l2ref) <= 0.03);
  CHECK(edge > err);
}

TEST_CASE("energy Xi") {
  const auto d = Domain::square(1.0, 10);
  const GradientOperator op(d, kFrac, PsiMap::identity());
  std::mt19937_64 rng(5);
  const auto M = CoefficientFunction::affine(2.0, 1.0);
  CHECK(energy_Xi(op, GridField::zero(d), 2.0, M) == 0.0);

  auto u = random_field(d, rng);
  u = scaled(u, std::sqrt(3.0 / op.modular(u, 2.0)));
  REQUIRE(op.modular(u, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(energy_Xi(op, u, 2.0, M) == doctest::Approx(5.25).epsilon(1e-12));

  const auto one = CoefficientFunction::constant(1.0);
  CHECK(energy_Xi(op, u, 3.0, one) == doctest::Approx(op.modular(u, 3.0) / 3.0).epsilon(1e-14));
  CHECK(energy_Xi(op, u, 3.0, M) >= 2.0 / 3.0 * op.modular(u, 3.0));

  // Generic coefficient: quadrature antiderivative.
  const CoefficientFunction sq("sq", [](double t) { return 1.0 + t * t; });
  CHECK(energy_Xi(op, u, 2.0, sq) == doctest::Approx((3.0 + 9.0) / 2.0).epsilon(1e-9));

  const CoefficientFunction bad("bad", [](double t) { return 1.0 - t; });
  CHECK_THROWS_AS(bad.validate(10.0), HypothesisError);
}

TEST_CASE("xi derivative pairing") {
  const auto d = Domain::square(1.0, 10);
  const GradientOperator op(d, kFrac, PsiMap::logarithmic());
  const auto M = CoefficientFunction::affine(2.0, 1.0);
  std::mt19937_64 rng(9);
  const auto v0 = random_field(d, rng);
  CHECK(xi_derivative_pairing(op, GridField::zero(d), v0, 3.0, M) == 0.0);

  for (double r : {2.0, 3.0}) {
    const auto u = random_field(d, rng);
    const double rho = op.modular(u, r);
    CHECK(xi_derivative_pairing(op, u, u, r, M) == doctest::Approx(M(rho) * rho).epsilon(1e-12));
    CHECK(xi_derivative_pairing(op, u, u, r, M) >= 2.0 * rho);
  }

  const double h = 1e-5;
  int bad = 0;
  for (int t = 0; t < 20; ++t) {
    const double r = t % 2 ? 3.0 : 2.0;
    const auto u = smooth_random(d, rng);
    const auto v = smooth_random(d, rng);
    GridField up = u, um = u;
    for (std::size_t k = 0; k < u.values.size(); ++k) {
      up.values[k] += h * v.values[k];
      um.values[k] -= h * v.values[k];
    }
    const double fd = (energy_Xi(op, up, r, M) - energy_Xi(op, um, r, M)) / (2.0 * h);
    const double an = xi_derivative_pairing(op, u, v, r, M);
    if (std::abs(fd - an) > 1e-6 * std::max(std::abs(an), 1e-3 * op.modular(u, r))) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("monotone operator inequality") {
  const auto d = Domain::square(1.0, 8);
  const GradientOperator op(d, kFrac, PsiMap::identity());
  const auto M = CoefficientFunction::affine(1.0, 0.5);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> amp(0.1, 3.0);
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    const double r = t % 2 ? 3.0 : 2.0;
    const auto u = random_field(d, rng, amp(rng));
    const auto v = random_field(d, rng, amp(rng));
    const auto w = minus(u, v);
    const double lhs = xi_derivative_pairing(op, u, w, r, M) - xi_derivative_pairing(op, v, w, r, M);
    const double ru = op.modular(u, r), rv = op.modular(v, r);
    // Hölder lower bound of the monotonicity chain.
    const double bound = (M(ru) * std::pow(ru, 1.0 - 1.0 / r) - M(rv) * std::pow(rv, 1.0 - 1.0 / r)) *
                         (std::pow(ru, 1.0 / r) - std::pow(rv, 1.0 / r));
    const double scale = M(ru) * ru + M(rv) * rv;
    if (!(bound >= -1e-10 * scale && lhs >= bound - 1e-10 * scale)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("strict monotonicity and Young bound") {
  const auto d = Domain::square(1.0, 8);
  const GradientOperator op(d, kFrac, PsiMap::identity());
  const auto M = CoefficientFunction::constant(1.0);
  std::mt19937_64 rng(13);
  for (double r : {2.0, 3.0}) {
    const auto u = random_field(d, rng);
    const auto zero = minus(u, u);
    const double same = xi_derivative_pairing(op, u, zero, r, M);
    CHECK(same == 0.0);
    CHECK(op.modular(zero, r) <= 1e-12);
    for (int t = 0; t < 20; ++t) {
      const auto a = random_field(d, rng), b = random_field(d, rng);
      const auto w = minus(a, b);
      const double pair = xi_derivative_pairing(op, a, w, r, M) - xi_derivative_pairing(op, b, w, r, M);
      CHECK(pair > 0.0);
      const double young = (r - 1.0) / r * op.modular(a, r) + op.modular(b, r) / r;
      CHECK(xi_derivative_pairing(op, a, b, r, M) <= young * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("comparison check") {
  const auto d = Domain::square(1.0, 16);
  const GradientOperator op(d, FracParams{0.8, 0.5, 2.0}, PsiMap::identity());
  const SeparablePreconditioner pre(op);
  const auto cone = TestCone::interior(d);
  const auto one = CoefficientFunction::constant(1.0);

  const auto e = solve_torsion(op, pre, 2.0).e;
  CHECK(comparison_check(op, e, e, 2.0, one, cone).status == ComparisonResult::Status::ordered);

  const auto u1 = solve_dirichlet(op, pre, 2.0, std::vector<double>(d.interior().size(), 1.0));
  const auto u2 = solve_dirichlet(op, pre, 2.0, std::vector<double>(d.interior().size(), 2.0));
  const auto ok = comparison_check(op, u1, u2, 2.0, one, cone);
  CHECK(ok.status_name() == "ordered");
  CHECK(ok.violating_nodes.empty());

  const auto flipped = comparison_check(op, scaled(u2, 2.0), u2, 2.0, one, cone);
  CHECK(flipped.status == ComparisonResult::Status::hypothesis_not_met);
  CHECK(flipped.hypothesis_margin > 0.0);
}
