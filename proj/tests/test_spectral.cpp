#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hk/coeff.hpp"
#include "hk/errors.hpp"
#include "hk/plap.hpp"
#include "hk/spectral.hpp"

using namespace hk;
using std::numbers::pi;

namespace {

const FracParams kClassical{0.999, 0.0, 2.0};

}  // namespace

TEST_CASE("classical eigenvalue in 1D") {
  const auto d = Domain::interval(1.0, 255);
  const GradientOperator op(d, kClassical, PsiMap::identity());
  const auto e = first_eigenpair(op, 2.0);
  CHECK(std::abs(e.lambda1 - pi * pi) <= 0.01 * pi * pi);
  CHECK(e.theta.max() == 1.0);
  CHECK(e.theta.has_zero_trace());
  for (std::size_t k : d.interior()) CHECK(e.theta.values[k] > 0.0);
}

TEST_CASE("classical eigenvalue on the square") {
  const auto d = Domain::square(1.0, 64);
  const GradientOperator op(d, kClassical, PsiMap::identity());
  const auto e = first_eigenpair(op, 2.0);
  CHECK(std::abs(e.lambda1 - 2.0 * pi * pi) <= 0.015 * 2.0 * pi * pi);
  CHECK(e.theta.max() == 1.0);
}

TEST_CASE("fractional eigenpair: Rayleigh identity, minimality, start independence") {
  const auto d = Domain::square(1.0, 16);
  const GradientOperator op(d, FracParams{0.75, 0.5, 3.0}, PsiMap::power(2.0));
  const SeparablePreconditioner pre(op);
  for (double r : {2.0, 3.0}) {
    const auto e = first_eigenpair(op, pre, r);
    CHECK(e.theta.max() == 1.0);
    for (std::size_t k : d.interior()) CHECK(e.theta.values[k] > 0.0);

    double lr = 0.0;
    for (std::size_t k : d.interior()) lr += d.weights()[k] * std::pow(e.theta.values[k], r);
    const double pairing = xi_derivative_pairing(op, e.theta, e.theta, r, CoefficientFunction::constant(1.0));
    CHECK(std::abs(pairing - e.lambda1 * lr) <= 1e-6 * pairing);

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int below = 0;
    for (int t = 0; t < 50; ++t) {
      GridField v = GridField::zero(d);
      for (std::size_t k : d.interior()) v.values[k] = U(rng) + (t % 2 ? e.theta.values[k] : 0.0);
      if (rayleigh_quotient(op, v, r) < e.lambda1 * (1.0 - 1e-3)) ++below;
      GridField w = v;
      for (double& x : w.values) x *= 7.5;
      CHECK(rayleigh_quotient(op, w, r) == doctest::Approx(rayleigh_quotient(op, v, r)).epsilon(1e-12));
    }
    CHECK(below == 0);

    EigenOptions tight;
    tight.tol = 1e-13;
    const auto e1 = first_eigenpair(op, pre, r, tight);
    tight.seed = 77;
    const auto e2 = first_eigenpair(op, pre, r, tight);
    CHECK(e2.lambda1 == doctest::Approx(e.lambda1).epsilon(1e-7));
    double diff = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) diff = std::max(diff, std::abs(e2.theta.values[k] - e1.theta.values[k]));
    CHECK(diff <= 1e-6);
  }
}

TEST_CASE("barrier constants: classical trigonometric oracle") {
  const auto d = Domain::interval(1.0, 511);
  const GradientOperator op(d, kClassical, PsiMap::identity());
  const auto e = first_eigenpair(op, 2.0);
  const auto b = barrier_constants(op, e, 0.1);
  REQUIRE(b.ok);
  CHECK(std::abs(b.m - pi * pi * std::cos(0.2 * pi)) <= 0.03 * pi * pi * std::cos(0.2 * pi));
  CHECK(std::abs(b.sigma - std::sin(0.1 * pi)) <= 0.03 * std::sin(0.1 * pi));

  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {0.02, 0.05, 0.1, 0.15, 0.2}) {
    const auto bd = barrier_constants(op, e, delta);
    REQUIRE(bd.ok);
    CHECK(bd.m <= prev);
    prev = bd.m;
  }

  const auto wide = barrier_constants(op, e, 0.45);
  CHECK_FALSE(wide.ok);
  CHECK(wide.m <= 0.0);
  CHECK_THROWS_AS(barrier_constants(op, e, 0.5), ParameterError);
  CHECK_THROWS_AS(barrier_constants(op, e, 0.0), ParameterError);

  const auto s = search_barrier(op, e, default_delta_candidates(1.0));
  CHECK(s.ok);
  CHECK(s.delta == doctest::Approx(0.05));
}

TEST_CASE("barrier gap matches the strip minimum") {
  const auto d = Domain::square(1.0, 24);
  const GradientOperator op(d, FracParams{0.75, 0.5, 3.0}, PsiMap::identity());
  const auto e = first_eigenpair(op, 3.0);
  const auto gap = barrier_gap(op, e);
  const auto b = barrier_constants(op, e, 0.1);
  double m = std::numeric_limits<double>::infinity(), sigma = m;
  for (std::size_t k : d.interior()) {
    if (b.strip[k]) m = std::min(m, gap[k]);
    else sigma = std::min(sigma, e.theta.values[k]);
  }
  CHECK(b.m == m);
  CHECK(b.sigma == sigma);
  CHECK(b.ok == (m > 0.0));
}
