#include "hk/reduction.hpp"

#include <cmath>
#include <numbers>

#include "hk/plap.hpp"
#include "hk/spectral.hpp"
#include "hk/torsion.hpp"

namespace hk {

namespace {

ReductionRow row(std::string name, double computed, double exact, std::optional<double> tol) {
  const double rel = std::abs(computed - exact) / std::abs(exact);
  return {std::move(name), computed, exact, rel, tol, !tol || rel <= *tol};
}

}  // namespace

std::vector<ReductionRow> classical_reduction(const ReductionOptions& opt) {
  using std::numbers::pi;
  const FracParams params{opt.alpha, opt.beta, 2.0};
  const double T = opt.T, k = pi / T;
  std::vector<ReductionRow> rows;

  const auto sq = Domain::square(T, opt.n2d);
  const GradientOperator op2(sq, params, PsiMap::identity());
  rows.push_back(row("lambda1", first_eigenpair(op2, 2.0).lambda1, 2.0 * k * k, 0.015));

  const auto line = Domain::interval(T, opt.n1d);
  const GradientOperator op1(line, params, PsiMap::identity());
  rows.push_back(row("torsion_sup_1d", solve_torsion(op1, 2.0).l, T * T / 8.0, 0.01));

  const auto big = Domain::square(T, opt.napply);
  const GradientOperator opa(big, params, PsiMap::identity());
  const auto u = GridField::sample(big, [&](double x, double y) { return std::sin(k * x) * std::sin(k * y); });
  const auto au = PLapOperator(opa, 2.0).apply(u);
  double l2 = 0.0, l2ref = 0.0, away = 0.0, all = 0.0;
  for (std::size_t n : big.interior()) {
    const double exact = 2.0 * k * k * u.values[n];
    const double e = std::abs(au.values[n] - exact);
    l2 += big.weights()[n] * e * e;
    l2ref += big.weights()[n] * exact * exact;
    all = std::max(all, e);
    if (big.boundary_distance(n) >= opt.layer * T) away = std::max(away, e);
  }
  const double scale = 2.0 * k * k;
  const double rel_l2 = std::sqrt(l2 / l2ref);
  rows.push_back({"apply_l2", rel_l2, 0.0, rel_l2, 0.03, rel_l2 <= 0.03});
  rows.push_back({"apply_sup_away_from_edge", away / scale, 0.0, away / scale, 0.03, away / scale <= 0.03});
  rows.push_back({"apply_sup_all_nodes", all / scale, 0.0, all / scale, std::nullopt, true});
  return rows;
}

}  // namespace hk
