#include <doctest.h>

#include <cmath>
#include <random>

#include "hk/errors.hpp"
#include "hk/torsion.hpp"

using namespace hk;

namespace {

const FracParams kClassical{0.999, 0.0, 2.0};

}  // namespace

TEST_CASE("classical torsion in 1D and domain scaling") {
  for (double T : {1.0, 2.0}) {
    const auto d = Domain::interval(T, 255);
    const GradientOperator op(d, kClassical, PsiMap::identity());
    const auto s = solve_torsion(op, 2.0);
    CHECK(std::abs(s.l - T * T / 8.0) <= 0.01 * T * T / 8.0);
  }
}

TEST_CASE("torsion residual, positivity and interior maximum") {
  const auto d = Domain::square(1.0, 20);
  const GradientOperator log_op(d, FracParams{0.75, 0.5, 3.0}, PsiMap::logarithmic());
  const GradientOperator id_op(d, FracParams{0.75, 0.5, 3.0}, PsiMap::identity());
  TorsionOptions opt;
  opt.tol = 1e-10;
  for (double r : {2.0, 3.0, 1.7}) {
    const auto& op = r < 2.0 ? id_op : log_op;
    const SeparablePreconditioner pre(op);
    const auto s = solve_torsion(op, pre, r, opt);
    const auto ones = GridField::sample(d, [](double, double) { return 1.0; });
    const auto res = op.weak_residual(s.e, r, 1.0, ones, TestCone::interior(d));
    double worst = 0.0;
    for (double v : res) worst = std::max(worst, std::abs(v));
    CHECK(worst <= 10.0 * opt.tol);

    std::size_t arg = 0;
    for (std::size_t k : d.interior()) {
      CHECK(s.e.values[k] > 0.0);
      if (s.e.values[k] > s.e.values[arg]) arg = k;
    }
    CHECK(d.boundary_distance(arg) > 2.0 / 21.0);
    CHECK(s.l == s.e.max());

    for (std::size_t i = 1; i < s.energy_history.size(); ++i)
      CHECK(s.energy_history[i] <= s.energy_history[i - 1] + 1e-14 * std::abs(s.energy_history[i - 1]));
  }
}

TEST_CASE("torsion uniqueness from different starts") {
  const auto d = Domain::square(1.0, 16);
  const GradientOperator op(d, FracParams{0.75, 0.5, 3.0}, PsiMap::identity());
  const SeparablePreconditioner pre(op);
  const auto a = solve_torsion(op, pre, 3.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 0.5);
  std::vector<double> start(d.interior().size());
  for (double& v : start) v = U(rng);
  const auto b = solve_torsion(op, pre, 3.0, {}, &start);
  double diff = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) diff = std::max(diff, std::abs(a.e.values[k] - b.e.values[k]));
  CHECK(diff <= 1e-6);
}

TEST_CASE("general Dirichlet solve") {
  const auto d = Domain::square(1.0, 12);
  const GradientOperator op(d, FracParams{0.8, 0.5, 2.0}, PsiMap::identity());
  const SeparablePreconditioner pre(op);
  const auto e = solve_torsion(op, pre, 2.0).e;
  const auto u = solve_dirichlet(op, pre, 2.0, std::vector<double>(d.interior().size(), 3.0));
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(u.values[k] == doctest::Approx(3.0 * e.values[k]).epsilon(1e-8));

  // M(ρ)·A u = 1 with M = 1 + t: u = s·e with s(1 + s²ρ(e)) = 1.
  const auto M = CoefficientFunction::affine(1.0, 1.0);
  const auto w = solve_dirichlet(op, pre, 2.0, std::vector<double>(d.interior().size(), 1.0), M);
  const double rho = op.modular(e, 2.0);
  double s = 1.0;
  for (int i = 0; i < 100; ++i) s -= (s * (1.0 + s * s * rho) - 1.0) / (1.0 + 3.0 * s * s * rho);
  CHECK(w.max() == doctest::Approx(s * e.max()).epsilon(1e-8));

  CHECK(solve_dirichlet(op, pre, 2.0, std::vector<double>(d.interior().size(), 0.0)).sup_norm() == 0.0);
  CHECK_THROWS_AS(solve_dirichlet(op, pre, 2.0, {1.0}), SizeError);
  CHECK_THROWS_AS(solve_torsion(op, 1.0), ParameterError);
}
