#include <doctest.h>

#include <cmath>
#include <limits>

#include "hk/errors.hpp"
#include "hk/kirchhoff.hpp"

using namespace hk;

namespace {

const Domain& grid() {
  static const Domain d = Domain::square(1.0, 16);
  return d;
}

const Auxiliary& demo_aux() {
  static const Auxiliary aux = compute_auxiliary(KirchhoffInstance::demo(), grid());
  return aux;
}

KirchhoffInstance demo_at(double zeta) {
  auto inst = KirchhoffInstance::demo();
  inst.zeta = zeta;
  return inst;
}

const ZetaSearchResult& demo_search() {
  static const ZetaSearchResult res = find_zeta_star(KirchhoffInstance::demo(), demo_aux());
  return res;
}

bool field_leq(const GridField& a, const GridField& b, double tol) {
  const double s = std::max(b.sup_norm(), 1e-300);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    if (a.values[k] > b.values[k] + tol * s) return false;
  return true;
}

}  // namespace

TEST_CASE("presets") {
  CHECK(Nonlinearity::parse("sqrt_sum")(1.0, 3.0) == 2.0);
  CHECK(Nonlinearity::parse("square_sum")(1.0, 2.0) == 9.0);
  CHECK(Nonlinearity::parse("scaled_sqrt_sum:10")(2.0, 2.0) == 20.0);
  CHECK(Nonlinearity::parse("power_sum:1.5")(2.0, 2.0) == doctest::Approx(8.0));
  CHECK(Nonlinearity::parse("const:4")(9.0, 9.0) == 4.0);
  CHECK(Nonlinearity::parse("zero")(9.0, 9.0) == 0.0);
  CHECK_THROWS_AS(Nonlinearity::parse("cube"), ConfigError);
  CHECK_THROWS_AS(Nonlinearity::parse("const:x"), ConfigError);
  CHECK_THROWS_AS(Nonlinearity::parse("const"), ConfigError);
  CHECK(WeightFunction::parse("const:2", 1.0, 2)(0.3, 0.3) == 2.0);
  CHECK(WeightFunction::parse("bump:1,2", 1.0, 2)(0.5, 0.5) == doctest::Approx(3.0));
  CHECK(WeightFunction::parse("bump:1,2", 1.0, 2)(0.0, 0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(WeightFunction::parse("bump:1", 1.0, 2), ConfigError);
  CHECK(parse_sub_mode("lower_bound") == SubMode::lower_bound);
  CHECK_THROWS_AS(parse_sub_mode("other"), ConfigError);
}

TEST_CASE("instance validation and extension floor") {
  auto inst = KirchhoffInstance::demo();
  CHECK_NOTHROW(inst.validate());
  inst.q = 3.5;
  CHECK_THROWS_AS(inst.validate(), ParameterError);
  inst = KirchhoffInstance::demo();
  inst.alpha = 0.3;
  CHECK_THROWS_AS(inst.validate(), ParameterError);

  inst = KirchhoffInstance::demo();
  inst.f = Nonlinearity::constant(-5.0);
  CHECK(inst.f_ext(1.0, 1.0, 2.0) == -0.5);
  CHECK(inst.f_ext(-3.0, 1.0, 2.0) == -0.5);
  inst.f = Nonlinearity::sqrt_sum();
  CHECK(inst.f_ext(-3.0, 4.0, 1.0) == 2.0);
  CHECK(inst.chi_ext(-3.0, -4.0, 1.0) == 0.0);
}

TEST_CASE("hypothesis checks") {
  const auto& d = grid();
  const auto demo = check_hypotheses(KirchhoffInstance::demo(), d);
  CHECK(demo.ok);
  CHECK(demo.sampled_not_proven);
  CHECK(demo.checks.size() == 8);

  auto sq = KirchhoffInstance::demo();
  sq.chi = Nonlinearity::square_sum();
  const auto r5 = check_hypotheses(sq, d);
  CHECK_FALSE(r5.ok);
  for (const auto& c : r5.checks)
    if (c.name == "H5") CHECK_FALSE(c.ok);

  auto cst = KirchhoffInstance::demo();
  cst.f = Nonlinearity::constant(3.0);
  const auto r3 = check_hypotheses(cst, d);
  for (const auto& c : r3.checks)
    if (c.name == "H3") CHECK_FALSE(c.ok);

  auto dec = KirchhoffInstance::demo();
  dec.f = Nonlinearity("dec", [](double s, double t) { return std::sqrt(t) - 0.1 * s; });
  for (const auto& c : check_hypotheses(dec, d).checks)
    if (c.name == "H3") CHECK_FALSE(c.ok);

  auto weak = KirchhoffInstance::demo();
  weak.f = Nonlinearity::power_sum(2.5);  // f(t, ·)/t² grows
  for (const auto& c : check_hypotheses(weak, d).checks)
    if (c.name == "H4") CHECK_FALSE(c.ok);

  auto nan = KirchhoffInstance::demo();
  nan.f = Nonlinearity("nan", [](double s, double) { return s > 100.0 ? std::nan("") : s; });
  CHECK_THROWS_AS(check_hypotheses(nan, d), HypothesisError);

  auto neg = KirchhoffInstance::demo();
  neg.a = WeightFunction::constant(-1.0);
  for (const auto& c : check_hypotheses(neg, d).checks)
    if (c.name == "H2") CHECK_FALSE(c.ok);

  auto mdec = KirchhoffInstance::demo();
  mdec.M1 = CoefficientFunction::affine(2.0, -1e-3);
  for (const auto& c : check_hypotheses(mdec, d).checks)
    if (c.name == "H1") CHECK_FALSE(c.ok);
}

TEST_CASE("auxiliary data") {
  const auto& aux = demo_aux();
  CHECK(aux.m > 0.0);
  CHECK(aux.m == std::min(aux.bar_p.m, aux.bar_q.m));
  CHECK(aux.sigma > 0.0);
  CHECK(aux.eig_p.theta.max() == 1.0);
  CHECK(aux.tor_p.l > aux.tor_q.l);
  CHECK(aux.a0 == 1.0);
  CHECK(aux.b_sup == 1.0);
}

TEST_CASE("subsolution formulas") {
  const auto& aux = demo_aux();
  const auto inst = demo_at(1e6);
  const double m1 = inst.M1.lower_bound();

  double K1 = 0.0;
  const auto [phi1, phi2] = construct_subsolution(inst, aux, SubMode::lower_bound, &K1);
  CHECK(phi1.max() == doctest::Approx((2.0 / 3.0) * std::sqrt(inst.zeta * inst.k0 / (aux.m * m1))).epsilon(1e-12));
  CHECK(phi1.has_zero_trace());
  for (std::size_t k : grid().interior()) CHECK(phi1.values[k] > 0.0);
  // q = 2: prefactor (q−1)/q = 1/2 and bracket power 1.
  CHECK(phi2.max() == doctest::Approx(0.5 * inst.zeta * inst.k0 / (aux.m * inst.M2.lower_bound())).epsilon(1e-12));

  const auto doubled = construct_subsolution(demo_at(2e6), aux, SubMode::lower_bound).first;
  for (std::size_t k : grid().interior())
    CHECK(doubled.values[k] == doctest::Approx(std::sqrt(2.0) * phi1.values[k]).epsilon(1e-12));

  double S1 = 0.0, S2 = 0.0;
  const auto [s1, s2] = construct_subsolution(inst, aux, SubMode::self_consistent, &S1, &S2);
  const double target = inst.zeta * inst.k0 / aux.m;
  CHECK(S1 * S1 * inst.M1(aux.op->modular(s1, 3.0)) == doctest::Approx(target).epsilon(1e-12));
  CHECK(S2 * inst.M2(aux.op->modular(s2, 2.0)) == doctest::Approx(target).epsilon(1e-12));
  CHECK(S1 < K1);

  Auxiliary broken = aux;
  broken.m = 0.0;
  CHECK_THROWS_AS(construct_subsolution(inst, broken, SubMode::self_consistent), ConstructionError);
}

TEST_CASE("supersolution formulas") {
  const auto& aux = demo_aux();
  const auto inst = demo_at(50.0);
  const double c = 3.0;
  const auto [psi1, psi2] = construct_supersolution(inst, aux, c);
  CHECK(psi1.max() == doctest::Approx(c * std::sqrt(50.0)).epsilon(1e-12));
  const auto twice = construct_supersolution(inst, aux, 2.0 * c).first;
  for (std::size_t k = 0; k < psi1.values.size(); ++k)
    CHECK(twice.values[k] == doctest::Approx(2.0 * psi1.values[k]).epsilon(1e-14));

  const double S = c * std::sqrt(50.0);
  const double expect = std::sqrt(2.0 * S) * 50.0 / inst.M2.lower_bound();
  for (std::size_t k : grid().interior())
    CHECK(psi2.values[k] / aux.tor_q.e.values[k] == doctest::Approx(expect).epsilon(1e-12));

  auto zero = inst;
  zero.chi = Nonlinearity::zero();
  CHECK_THROWS_AS(construct_supersolution(zero, aux, c), ConstructionError);
  CHECK_THROWS_AS(construct_supersolution(inst, aux, 0.0), ConstructionError);
}

TEST_CASE("find_c") {
  const auto& aux = demo_aux();
  const auto inst = demo_at(50.0);
  const auto fc = find_c(inst, aux);
  REQUIRE(fc.found);
  CHECK(fc.ratio1 >= 1.0);
  CHECK(fc.ratio2 >= 1.0);
  // direct scalar evaluation of both conditions
  const double S = fc.c * std::sqrt(50.0);
  const double sup2 = std::sqrt(2.0 * S) * 50.0 / inst.M2.lower_bound() * aux.tor_q.l;
  CHECK(inst.M1.lower_bound() * std::pow(fc.c / aux.tor_p.l, 2.0) >= std::sqrt(S + sup2));
  CHECK(S >= sup2);
  if (fc.c > 1.0) {
    const auto prev = find_c(inst, aux, fc.doublings - 1);
    CHECK_FALSE(prev.found);
  }

  auto fz = inst;
  fz.f = Nonlinearity::zero();
  CHECK(find_c(fz, aux, 0).ratio1 >= 1.0);

  auto sup = inst;
  sup.chi = Nonlinearity::square_sum();
  const auto bad = find_c(sup, aux, 60);
  CHECK_FALSE(bad.found);
  CHECK(bad.ratio2 < 1.0);
}

TEST_CASE("zeta search and verdicts") {
  const auto& aux = demo_aux();
  const auto& res = demo_search();
  REQUIRE(res.found);
  REQUIRE(res.pair);
  CHECK(res.report.ok);
  CHECK(res.report.verdicts.size() == 6);
  CHECK(res.history.back().zeta == res.zeta_star);
  CHECK(res.history.size() >= 2);
  CHECK_FALSE(res.history[res.history.size() - 2].sub_ok);
  CHECK(field_leq(res.pair->phi1, res.pair->psi1, 0.0));
  CHECK(field_leq(res.pair->phi2, res.pair->psi2, 0.0));

  const auto cone = TestCone::interior(grid());
  auto recheck = [&](double zeta, double c_factor) {
    const auto inst = demo_at(zeta);
    const auto fc = find_c(inst, aux);
    const auto pair = construct_pair(inst, aux, fc.c * c_factor);
    return verify_pair(inst, aux, pair, cone);
  };
  const auto small = recheck(res.zeta_star / 100.0, 1.0);
  CHECK_FALSE(small.sub_ok());
  CHECK(small.super_ok());
  CHECK(recheck(2.0 * res.zeta_star, 1.0).ok);
  CHECK(recheck(res.zeta_star, 1e3).ok);

  auto strong = KirchhoffInstance::demo();
  strong.f = Nonlinearity::sqrt_sum(10.0);
  const auto res10 = find_zeta_star(strong, aux);
  REQUIRE(res10.found);
  CHECK(res10.zeta_star <= res.zeta_star);
}

TEST_CASE("lower-bound subsolution never verifies") {
  ZetaSearchOptions opt;
  opt.mode = SubMode::lower_bound;
  opt.max_doublings = 120;
  const auto res = find_zeta_star(KirchhoffInstance::demo(), demo_aux(), opt);
  CHECK_FALSE(res.found);
  for (const auto& s : res.history) CHECK_FALSE(s.sub_ok);
}

TEST_CASE("monotone iteration from the subsolution and from the supersolution") {
  const auto& aux = demo_aux();
  const auto& res = demo_search();
  REQUIRE(res.found);
  const auto inst = demo_at(res.zeta_star);
  IterationOptions opt;
  opt.tol = 1e-8;
  const auto lo = monotone_iteration(inst, aux, *res.pair, opt);
  CHECK(lo.converged);
  CHECK(lo.min_step_u >= -opt.tol);
  CHECK(lo.min_step_v >= -opt.tol);
  CHECK(lo.max_escape <= opt.tol);
  CHECK(lo.residual_u <= 10.0 * opt.tol);
  CHECK(lo.residual_v <= 10.0 * opt.tol);
  CHECK(field_leq(res.pair->phi1, lo.u, 1e-12));
  CHECK(field_leq(lo.u, res.pair->psi1, 1e-12));
  for (std::size_t i = 1; i < lo.increments.size(); ++i) CHECK(lo.increments[i] <= lo.increments[i - 1]);
  CHECK(lo.g_lambda_u == 0.0);

  opt.from_super = true;
  const auto hi = monotone_iteration(inst, aux, *res.pair, opt);
  CHECK(hi.converged);
  CHECK(hi.min_step_u >= -opt.tol);
  CHECK(hi.min_step_v >= -opt.tol);
  CHECK(field_leq(lo.u, hi.u, 1e-7));
  CHECK(field_leq(lo.v, hi.v, 1e-7));
}

TEST_CASE("auxiliary g for a decreasing coupling") {
  const auto& aux = demo_aux();
  const auto& res = demo_search();
  REQUIRE(res.found);
  auto inst = demo_at(res.zeta_star);
  const double su = std::max(res.pair->psi1.max(), res.pair->phi1.max());
  // decreases in s at unit rate across the bracket
  inst.f = Nonlinearity("dip", [su](double s, double t) { return std::sqrt(s + t) + std::max(0.0, su - s); });
  const double lambda = auxiliary_g_lambda(inst, aux, *res.pair, true);
  CHECK(lambda > 0.0);
  CHECK(lambda <= inst.zeta * 1.0 + 1e-9 * inst.zeta);
  CHECK(auxiliary_g_lambda(inst, aux, *res.pair, true, 2.0) == doctest::Approx(2.0 * lambda));
  CHECK(auxiliary_g_lambda(inst, aux, *res.pair, false) == 0.0);
}
