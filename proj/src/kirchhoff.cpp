#include "hk/kirchhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hk/energy.hpp"
#include "hk/errors.hpp"
#include "hk/minimize.hpp"

namespace hk {

namespace {

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "' in " + what);
    }
  }
  return out;
}

std::pair<std::string, std::vector<double>> split_preset(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, {}};
  return {spec.substr(0, colon), parse_numbers(spec.substr(colon + 1), spec)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double sup_over(const GridField& f) { return std::max(f.max(), 0.0); }

}  // namespace

// ---------------------------------------------------------------- presets

Nonlinearity Nonlinearity::sqrt_sum(double scale) {
  const std::string name = scale == 1.0 ? "sqrt_sum" : "scaled_sqrt_sum:" + fmt(scale);
  return Nonlinearity(name, [scale](double s, double t) { return scale * std::sqrt(s + t); });
}

Nonlinearity Nonlinearity::square_sum() {
  return Nonlinearity("square_sum", [](double s, double t) { return (s + t) * (s + t); });
}

Nonlinearity Nonlinearity::power_sum(double e) {
  if (!(e > 0.0)) throw ParameterError("power_sum exponent must be positive");
  return Nonlinearity("power_sum:" + fmt(e), [e](double s, double t) { return std::pow(s + t, e); });
}

Nonlinearity Nonlinearity::constant(double c) {
  return Nonlinearity("const:" + fmt(c), [c](double, double) { return c; });
}

Nonlinearity Nonlinearity::zero() {
  return Nonlinearity("zero", [](double, double) { return 0.0; });
}

Nonlinearity Nonlinearity::parse(const std::string& spec) {
  const auto [name, args] = split_preset(spec);
  auto want = [&](std::size_t n) {
    if (args.size() != n) throw ConfigError("nonlinearity '" + spec + "' expects " + std::to_string(n) + " argument(s)");
  };
  if (name == "sqrt_sum") return want(0), sqrt_sum();
  if (name == "square_sum") return want(0), square_sum();
  if (name == "zero") return want(0), zero();
  if (name == "const") return want(1), constant(args[0]);
  if (name == "scaled_sqrt_sum") return want(1), sqrt_sum(args[0]);
  if (name == "power_sum") {
    want(1);
    if (!(args[0] > 0.0)) throw ConfigError("power_sum exponent must be positive");
    return power_sum(args[0]);
  }
  throw ConfigError("unknown nonlinearity '" + spec + "'");
}

WeightFunction WeightFunction::constant(double c) {
  return WeightFunction("const:" + fmt(c), [c](double, double) { return c; });
}

WeightFunction WeightFunction::bump(double a0, double amp, double T, int dim) {
  return WeightFunction("bump:" + fmt(a0) + "," + fmt(amp), [=](double x, double y) {
    const double bx = 4.0 * x * (T - x) / (T * T);
    return a0 + amp * (dim == 2 ? bx * 4.0 * y * (T - y) / (T * T) : bx);
  });
}

WeightFunction WeightFunction::parse(const std::string& spec, double T, int dim) {
  const auto [name, args] = split_preset(spec);
  if (name == "const" && args.size() == 1) return constant(args[0]);
  if (name == "bump" && args.size() == 2) return bump(args[0], args[1], T, dim);
  throw ConfigError("unknown weight '" + spec + "'");
}

std::vector<double> WeightFunction::sample(const Domain& d) const {
  std::vector<double> out(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) out[k] = fn_(d.x(k), d.y(k));
  return out;
}

// ---------------------------------------------------------------- instance

KirchhoffInstance KirchhoffInstance::demo() { return KirchhoffInstance{}; }

void KirchhoffInstance::validate() const {
  if (!(q > 1.0)) throw ParameterError("q must exceed 1");
  if (!(p > q)) throw ParameterError("p must exceed q");
  if (!(zeta > 0.0)) throw ParameterError("zeta must be positive");
  if (!(k0 > 0.0)) throw ParameterError("k0 must be positive");
  FracParams fp{alpha, beta, p};
  fp.validate_for(p);
  fp.validate_for(q);
}

double KirchhoffInstance::f_ext(double s, double t, double a0) const {
  return std::max(f(std::max(s, 0.0), std::max(t, 0.0)), -k0 / a0);
}

double KirchhoffInstance::chi_ext(double s, double t, double b0) const {
  return std::max(chi(std::max(s, 0.0), std::max(t, 0.0)), -k0 / b0);
}

// ---------------------------------------------------------------- hypotheses

namespace {

double eval_checked(const Nonlinearity& F, double s, double t) {
  const double v = F(s, t);
  if (!std::isfinite(v))
    throw HypothesisError(F.name() + " is not evaluable at (" + fmt(s) + ", " + fmt(t) + ")");
  return v;
}

HypothesisCheck monotone_check(const std::string& label, const Nonlinearity& F, const std::vector<double>& ts) {
  std::vector<double> pts{0.0};
  pts.insert(pts.end(), ts.begin(), ts.end());
  HypothesisCheck c{label, true, "partial differences >= -1e-12 on the sample grid"};
  for (std::size_t i = 0; i < pts.size() && c.ok; ++i)
    for (std::size_t j = 0; j < pts.size() && c.ok; ++j) {
      const double v = eval_checked(F, pts[i], pts[j]);
      const double tol = 1e-12 * std::max(1.0, std::abs(v));
      if (i + 1 < pts.size() && eval_checked(F, pts[i + 1], pts[j]) - v < -tol) {
        c.ok = false;
        c.detail = "decreases in s at (" + fmt(pts[i]) + ", " + fmt(pts[j]) + ")";
      } else if (j + 1 < pts.size() && eval_checked(F, pts[i], pts[j + 1]) - v < -tol) {
        c.ok = false;
        c.detail = "decreases in t at (" + fmt(pts[i]) + ", " + fmt(pts[j]) + ")";
      }
    }
  if (!c.ok) return c;
  // lim f(t,t) = ∞: strictly increasing along the diagonal with a tenfold gain.
  std::vector<double> diag;
  for (double t : ts) diag.push_back(eval_checked(F, t, t));
  for (std::size_t i = 1; i < diag.size(); ++i)
    if (!(diag[i] > diag[i - 1])) {
      c.ok = false;
      c.detail = "diagonal values stop increasing at t=" + fmt(ts[i]) + ": limit is not infinite";
      return c;
    }
  if (!(diag.back() >= 10.0 * std::abs(diag.front()))) {
    c.ok = false;
    c.detail = "diagonal grows less than tenfold over the samples: limit looks finite";
  }
  return c;
}

// Ratio decreasing over the second half of the samples and ending below 1% of its peak.
HypothesisCheck vanishing_ratio(const std::string& label, const std::vector<double>& ts,
                                const std::vector<double>& ratio) {
  HypothesisCheck c{label, true, ""};
  const std::size_t half = ratio.size() / 2;
  for (std::size_t i = half + 1; i < ratio.size(); ++i)
    if (!(ratio[i] < ratio[i - 1])) {
      c.ok = false;
      c.detail = "ratio does not decrease at t=" + fmt(ts[i]) + " (" + fmt(ratio[i]) + ")";
      return c;
    }
  double peak = 0.0;
  for (double r : ratio) peak = std::max(peak, std::abs(r));
  c.ok = std::abs(ratio.back()) <= 1e-2 * peak;
  c.detail = "ratio " + fmt(ratio.front()) + " at t=" + fmt(ts.front()) + " -> " + fmt(ratio.back()) +
             " at t=" + fmt(ts.back());
  return c;
}

}  // namespace

HypothesisReport check_hypotheses(const KirchhoffInstance& inst, const Domain& d, const HypothesisOptions& opt) {
  inst.validate();
  if (!(opt.t_min > 0.0 && opt.t_max > opt.t_min)) throw ParameterError("hypothesis sample range is empty");
  std::vector<double> ts;
  for (double t = opt.t_min; t <= opt.t_max * (1.0 + 1e-12); t *= 10.0) ts.push_back(t);
  if (ts.size() < 3) throw ParameterError("hypothesis sample grid needs at least three points");

  HypothesisReport rep;
  auto& cs = rep.checks;

  HypothesisCheck h1{"H1", true, "M1, M2 positive and nondecreasing on [0, " + fmt(opt.t_max) + "]"};
  try {
    inst.M1.validate(opt.t_max);
    inst.M2.validate(opt.t_max);
  } catch (const HypothesisError& e) {
    h1.ok = false;
    h1.detail = e.what();
  }
  cs.push_back(h1);

  const auto av = inst.a.sample(d), bv = inst.b.sample(d);
  const double a0 = *std::min_element(av.begin(), av.end());
  const double b0 = *std::min_element(bv.begin(), bv.end());
  cs.push_back({"H2", a0 > 0.0 && b0 > 0.0, "a0 = " + fmt(a0) + ", b0 = " + fmt(b0)});

  auto h3f = monotone_check("H3.f", inst.f, ts);
  auto h3c = monotone_check("H3.chi", inst.chi, ts);
  cs.push_back({"H3", h3f.ok && h3c.ok, "f: " + h3f.detail + "; chi: " + h3c.detail});

  std::vector<double> r4, r5;
  for (double t : ts) {
    const double inner = std::pow(std::max(opt.frak_m * eval_checked(inst.chi, t, t), 0.0), 1.0 / (inst.q - 1.0));
    r4.push_back(eval_checked(inst.f, t, inner) / std::pow(t, inst.p - 1.0));
    r5.push_back(eval_checked(inst.chi, t, t) / std::pow(t, inst.q - 1.0));
  }
  cs.push_back(vanishing_ratio("H4", ts, r4));
  cs.push_back(vanishing_ratio("H5", ts, r5));

  cs.push_back({"HK1", true, "f, chi continuous; weights continuous on the closed domain"});

  const double e = std::min(inst.p, inst.q);
  bool hk2 = opt.g_lambda >= 0.0;
  double prev = -std::numeric_limits<double>::infinity();
  for (double s : {-1e3, -1.0, 0.0, 1.0, 1e3}) {
    const double g = opt.g_lambda * std::copysign(std::pow(std::abs(s), e - 1.0), s);
    hk2 = hk2 && g >= prev && std::abs(g) <= opt.g_lambda * (1.0 + std::pow(std::abs(s), e - 1.0)) + 1e-300;
    prev = g;
  }
  cs.push_back({"HK2", hk2, "g(s) = " + fmt(opt.g_lambda) + "|s|^" + fmt(e - 2.0) + "s"});

  bool floor_ok = true;
  if (a0 > 0.0 && b0 > 0.0)
    for (double s : {-1e3, -1.0, 0.0, 1.0})
      for (double t : {-1e3, -1.0, 0.0, 1.0})
        floor_ok = floor_ok && inst.f_ext(s, t, a0) >= -inst.k0 / a0 && inst.chi_ext(s, t, b0) >= -inst.k0 / b0;
  cs.push_back({"floor", floor_ok, "f >= -k0/a0 and chi >= -k0/b0 after extension"});

  rep.ok = std::all_of(cs.begin(), cs.end(), [](const HypothesisCheck& c) { return c.ok; });
  return rep;
}

// ---------------------------------------------------------------- auxiliary data

Auxiliary compute_auxiliary(const KirchhoffInstance& inst, const Domain& d, const AuxiliaryOptions& opt) {
  inst.validate();
  inst.psi.validate_on(d.gx());
  auto op = std::make_shared<const GradientOperator>(d, inst.params(), inst.psi);
  auto pre = std::make_shared<const SeparablePreconditioner>(*op);
  auto eig_p = first_eigenpair(*op, *pre, inst.p, opt.eigen);
  auto eig_q = first_eigenpair(*op, *pre, inst.q, opt.eigen);

  const auto deltas = opt.delta_candidates.empty() ? default_delta_candidates(d.length()) : opt.delta_candidates;
  BarrierConstants bar_p, bar_q;
  std::string why;
  for (double delta : deltas) {
    bar_p = barrier_constants(*op, eig_p, delta);
    bar_q = barrier_constants(*op, eig_q, delta);
    if (bar_p.ok && bar_q.ok) break;
    why += "delta=" + fmt(delta) + ": " + (bar_p.ok ? bar_q.reason : bar_p.reason) + "; ";
  }
  if (!(bar_p.ok && bar_q.ok)) throw ConstructionError("no strip width gives a positive gap: " + why);
  const double m = std::min(bar_p.m, bar_q.m);
  const double delta = bar_p.delta;
  const double sigma = std::min(bar_p.sigma, bar_q.sigma);

  auto tor_p = solve_torsion(*op, *pre, inst.p, opt.torsion);
  auto tor_q = solve_torsion(*op, *pre, inst.q, opt.torsion);

  auto an = inst.a.sample(d), bn = inst.b.sample(d);
  const double a0 = *std::min_element(an.begin(), an.end()), a_sup = *std::max_element(an.begin(), an.end());
  const double b0 = *std::min_element(bn.begin(), bn.end()), b_sup = *std::max_element(bn.begin(), bn.end());
  if (!(a0 > 0.0 && b0 > 0.0)) throw HypothesisError("weights a, b must be positive on the grid");
  return Auxiliary{std::move(op), std::move(pre), std::move(eig_p), std::move(eig_q), std::move(bar_p),
                   std::move(bar_q), m, delta, sigma, std::move(tor_p), std::move(tor_q),
                   std::move(an), std::move(bn), a0, b0, a_sup, b_sup};
}

// ---------------------------------------------------------------- construction

SubMode parse_sub_mode(const std::string& s) {
  if (s == "self_consistent") return SubMode::self_consistent;
  if (s == "lower_bound") return SubMode::lower_bound;
  throw ConfigError("unknown subsolution mode '" + s + "'");
}

std::string sub_mode_name(SubMode m) { return m == SubMode::self_consistent ? "self_consistent" : "lower_bound"; }

namespace {

// K with K^{r−1}·M(c_r^r·K^r·R) = target, by bisection in log K.
double solve_scale(double r, const CoefficientFunction& M, double R, double target) {
  const double cr = (r - 1.0) / r;
  auto h = [&](double K) { return std::pow(K, r - 1.0) * M(std::pow(cr * K, r) * R); };
  double hi = std::pow(target / M.lower_bound(), 1.0 / (r - 1.0));
  double lo = hi;
  for (int i = 0; i < 4000 && h(lo) > target; ++i) lo *= 0.5;
  if (!(h(lo) <= target)) throw ConstructionError("subsolution scale bracket not found");
  for (int i = 0; i < 200 && hi > lo * (1.0 + 1e-15); ++i) {
    const double mid = std::sqrt(lo * hi);
    (h(mid) <= target ? lo : hi) = mid;
  }
  return lo;
}

GridField powered(const GridField& theta, double e, double scale) {
  GridField out = theta;
  for (double& v : out.values) v = scale * std::pow(std::max(v, 0.0), e);
  return out;
}

}  // namespace

std::pair<GridField, GridField> construct_subsolution(const KirchhoffInstance& inst, const Auxiliary& aux,
                                                      SubMode mode, double* K1, double* K2) {
  if (!(aux.m > 0.0)) throw ConstructionError("barrier gap m must be positive");
  const double target = inst.zeta * inst.k0 / aux.m;
  auto build = [&](const EigenPair& eig, double r, const CoefficientFunction& M, double* Kout) {
    const double er = r / (r - 1.0);
    const GridField base = powered(eig.theta, er, 1.0);
    double K;
    if (mode == SubMode::lower_bound) {
      K = std::pow(target / M.lower_bound(), 1.0 / (r - 1.0));
    } else {
      K = solve_scale(r, M, aux.op->modular(base, r), target);
    }
    if (Kout) *Kout = K;
    return powered(eig.theta, er, (r - 1.0) / r * K);
  };
  return {build(aux.eig_p, inst.p, inst.M1, K1), build(aux.eig_q, inst.q, inst.M2, K2)};
}

namespace {

struct SuperScalars {
  double S;       // c(ζ‖a‖)^{1/(p−1)} = sup Ψ1
  double chiS;    // χ(S, S)
  double coef2;   // Ψ2 = coef2·e_q
};

SuperScalars super_scalars(const KirchhoffInstance& inst, const Auxiliary& aux, double c) {
  SuperScalars s{};
  s.S = c * std::pow(inst.zeta * aux.a_sup, 1.0 / (inst.p - 1.0));
  s.chiS = inst.chi_ext(s.S, s.S, aux.b0);
  s.coef2 = s.chiS > 0.0 ? std::pow(s.chiS * inst.zeta * aux.b_sup / inst.M2.lower_bound(), 1.0 / (inst.q - 1.0))
                         : 0.0;
  return s;
}

}  // namespace

std::pair<GridField, GridField> construct_supersolution(const KirchhoffInstance& inst, const Auxiliary& aux,
                                                        double c) {
  if (!(c > 0.0)) throw ConstructionError("supersolution constant c must be positive");
  const auto s = super_scalars(inst, aux, c);
  if (!(s.chiS > 0.0))
    throw ConstructionError("chi(S, S) = " + fmt(s.chiS) + " is not positive at S = " + fmt(s.S));
  GridField psi1 = aux.tor_p.e;
  for (double& v : psi1.values) v *= s.S / aux.tor_p.l;
  GridField psi2 = aux.tor_q.e;
  for (double& v : psi2.values) v *= s.coef2;
  return {std::move(psi1), std::move(psi2)};
}

SubSuperPair construct_pair(const KirchhoffInstance& inst, const Auxiliary& aux, double c, SubMode mode) {
  double K1 = 0.0, K2 = 0.0;
  auto [phi1, phi2] = construct_subsolution(inst, aux, mode, &K1, &K2);
  auto [psi1, psi2] = construct_supersolution(inst, aux, c);
  return SubSuperPair{std::move(phi1), std::move(phi2), std::move(psi1), std::move(psi2),
                      inst.zeta, c, K1, K2, aux.m, aux.delta, aux.sigma,
                      aux.tor_p.l, aux.tor_q.l, aux.eig_p.lambda1, aux.eig_q.lambda1};
}

FindCResult find_c(const KirchhoffInstance& inst, const Auxiliary& aux, int max_doublings) {
  FindCResult res;
  double c = 1.0;
  for (int k = 0; k <= max_doublings; ++k, c *= 2.0) {
    const auto s = super_scalars(inst, aux, c);
    const double sup2 = s.coef2 * aux.tor_q.l;
    const double lhs = inst.M1.lower_bound() * std::pow(c / aux.tor_p.l, inst.p - 1.0);
    const double rhs = inst.f_ext(s.S, sup2, aux.a0);
    res.c = c;
    res.doublings = k;
    res.ratio1 = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    res.ratio2 = sup2 > 0.0 ? s.S / sup2 : std::numeric_limits<double>::infinity();
    if (s.chiS > 0.0 && res.ratio1 >= 1.0 && res.ratio2 >= 1.0) {
      res.found = true;
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------- verification

bool VerifyReport::sub_ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.name.rfind("sub", 0) != 0 || v.ok; });
}
bool VerifyReport::super_ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.name.rfind("super", 0) != 0 || v.ok; });
}
bool VerifyReport::order_ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.name.rfind("order", 0) != 0 || v.ok; });
}

namespace {

// Normalized weak residuals (coeff·a_j(u) − mass_j·rhs_j)/(|coeff·a_j| + |mass_j·rhs_j|).
std::vector<double> scaled_residual(const GradientOperator& op, const GridField& u, double r,
                                    const CoefficientFunction& M, const std::vector<double>& rhs,
                                    const TestCone& cone) {
  const double coeff = M(op.modular(u, r));
  const auto a = op.flux_divergence(std::span<const double>(u.values), r);
  const auto& w = op.domain().weights();
  std::vector<double> out(cone.size());
  for (std::size_t j = 0; j < cone.size(); ++j) {
    const std::size_t k = cone.node(j);
    const double lhs = coeff * a[k], load = w[k] * rhs[k];
    const double scale = std::abs(lhs) + std::abs(load);
    out[j] = scale > 0.0 ? (lhs - load) / scale : 0.0;
  }
  return out;
}

std::vector<double> rhs_nodes(const KirchhoffInstance& inst, const Auxiliary& aux, const GridField& u,
                              const GridField& v, bool first) {
  std::vector<double> out(u.values.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = first ? inst.zeta * aux.a_nodes[k] * inst.f_ext(u.values[k], v.values[k], aux.a0)
                   : inst.zeta * aux.b_nodes[k] * inst.chi_ext(u.values[k], v.values[k], aux.b0);
  return out;
}

Verdict residual_verdict(const std::string& name, const std::vector<double>& res, bool sub, double tol,
                         const TestCone& cone) {
  Verdict v{name, true, -std::numeric_limits<double>::infinity(), 0, 0.0, 0.0};
  for (std::size_t j = 0; j < res.size(); ++j) {
    double m = sub ? res[j] : -res[j];
    if (std::isnan(m)) m = std::numeric_limits<double>::infinity();
    if (m > v.margin) {
      v.margin = m;
      v.worst_test = j;
    }
  }
  v.ok = v.margin <= tol;
  const std::size_t k = cone.node(v.worst_test);
  v.worst_x = cone.domain().x(k);
  v.worst_y = cone.domain().y(k);
  return v;
}

Verdict order_verdict(const std::string& name, const GridField& lo, const GridField& hi, double tol) {
  Verdict v{name, true, -std::numeric_limits<double>::infinity(), 0, 0.0, 0.0};
  const double scale = std::max(sup_over(hi), std::numeric_limits<double>::min());
  for (std::size_t k = 0; k < lo.values.size(); ++k) {
    double m = (lo.values[k] - hi.values[k]) / scale;
    if (std::isnan(m)) m = std::numeric_limits<double>::infinity();
    if (m > v.margin) {
      v.margin = m;
      v.worst_test = k;
    }
  }
  v.ok = v.margin <= tol;
  v.worst_x = lo.domain.x(v.worst_test);
  v.worst_y = lo.domain.y(v.worst_test);
  return v;
}

}  // namespace

VerifyReport verify_pair(const KirchhoffInstance& inst, const Auxiliary& aux, const SubSuperPair& pair,
                         const TestCone& cone, double tol) {
  if (cone.empty()) throw ParameterError("test cone is empty");
  const auto& op = *aux.op;
  KirchhoffInstance at = inst;
  at.zeta = pair.zeta;
  VerifyReport rep;
  auto add = [&](const std::string& name, const GridField& u, const GridField& v, bool first, bool sub) {
    const GridField& self = first ? u : v;
    const auto res = scaled_residual(op, self, first ? at.p : at.q, first ? at.M1 : at.M2,
                                     rhs_nodes(at, aux, u, v, first), cone);
    rep.verdicts.push_back(residual_verdict(name, res, sub, tol, cone));
  };
  add("sub1", pair.phi1, pair.phi2, true, true);
  add("sub2", pair.phi1, pair.phi2, false, true);
  add("super1", pair.psi1, pair.psi2, true, false);
  add("super2", pair.psi1, pair.psi2, false, false);
  rep.verdicts.push_back(order_verdict("order1", pair.phi1, pair.psi1, tol));
  rep.verdicts.push_back(order_verdict("order2", pair.phi2, pair.psi2, tol));
  rep.ok = std::all_of(rep.verdicts.begin(), rep.verdicts.end(), [](const Verdict& v) { return v.ok; });
  return rep;
}

ZetaSearchResult find_zeta_star(const KirchhoffInstance& inst, const Auxiliary& aux, const ZetaSearchOptions& opt) {
  ZetaSearchResult out;
  const auto cone = TestCone::interior(aux.op->domain());
  KirchhoffInstance at = inst;
  double zeta = opt.zeta0;
  for (int k = 0; k <= opt.max_doublings; ++k, zeta *= 2.0) {
    at.zeta = zeta;
    ZetaSearchStep step{zeta, 0.0, false, false, false};
    const auto fc = find_c(at, aux, opt.c_doublings);
    if (!fc.found) {
      out.history.push_back(step);
      continue;
    }
    double c = fc.c;
    SubSuperPair pair = construct_pair(at, aux, c, opt.mode);
    VerifyReport rep = verify_pair(at, aux, pair, cone, opt.tol);
    for (int j = fc.doublings; j < opt.c_doublings && rep.sub_ok() && !rep.order_ok(); ++j) {
      c *= 2.0;
      pair = construct_pair(at, aux, c, opt.mode);
      rep = verify_pair(at, aux, pair, cone, opt.tol);
    }
    step.c = c;
    step.sub_ok = rep.sub_ok();
    step.super_ok = rep.super_ok();
    step.order_ok = rep.order_ok();
    out.history.push_back(step);
    if (rep.ok) {
      out.found = true;
      out.zeta_star = zeta;
      out.pair = std::move(pair);
      out.report = std::move(rep);
      return out;
    }
    out.report = std::move(rep);
  }
  return out;
}

// ---------------------------------------------------------------- monotone iteration

double auxiliary_g_lambda(const KirchhoffInstance& inst, const Auxiliary& aux, const SubSuperPair& pair,
                          bool first, double g_scale) {
  const double su = std::max(sup_over(pair.psi1), sup_over(pair.phi1));
  const double sv = std::max(sup_over(pair.psi2), sup_over(pair.phi2));
  const int n = 32;
  double rate = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j) {
      double s0, s1, t0, t1;
      if (first) {
        s0 = su * i / n, s1 = su * (i + 1) / n, t0 = t1 = sv * j / n;
      } else {
        t0 = sv * i / n, t1 = sv * (i + 1) / n, s0 = s1 = su * j / n;
      }
      const double f0 = first ? inst.f_ext(s0, t0, aux.a0) : inst.chi_ext(s0, t0, aux.b0);
      const double f1 = first ? inst.f_ext(s1, t1, aux.a0) : inst.chi_ext(s1, t1, aux.b0);
      const double h = first ? s1 - s0 : t1 - t0;
      if (h > 0.0) rate = std::max(rate, (f0 - f1) / h);
    }
  const double wsup = first ? aux.a_sup : aux.b_sup;
  return g_scale * inst.zeta * wsup * rate;
}

double normalized_residual(const GradientOperator& op, const GridField& u, double r, const CoefficientFunction& M,
                           const std::vector<double>& rhs) {
  const double coeff = M(op.modular(u, r));
  const auto a = op.flux_divergence(std::span<const double>(u.values), r);
  const auto& d = op.domain();
  double num = 0.0, den = 0.0;
  for (std::size_t k : d.interior()) {
    const double lhs = coeff * a[k], load = d.weights()[k] * rhs[k];
    num = std::max(num, std::abs(lhs - load));
    den = std::max(den, std::abs(lhs) + std::abs(load));
  }
  return den > 0.0 ? num / den : 0.0;
}

BracketSolution monotone_iteration(const KirchhoffInstance& inst, const Auxiliary& aux, const SubSuperPair& pair,
                                   const IterationOptions& opt) {
  if (!(opt.tol > 0.0) || opt.max_iter < 1) throw ParameterError("iteration tolerance and budget must be positive");
  KirchhoffInstance at = inst;
  at.zeta = pair.zeta;
  const auto& op = *aux.op;
  const auto& d = op.domain();
  const double e = std::min(at.p, at.q);
  const double lu = auxiliary_g_lambda(at, aux, pair, true, opt.g_scale);
  const double lv = auxiliary_g_lambda(at, aux, pair, false, opt.g_scale);
  auto g = [e](double lambda, double s) { return lambda * std::copysign(std::pow(std::abs(s), e - 1.0), s); };

  const double inf = std::numeric_limits<double>::infinity();
  BracketSolution sol{opt.from_super ? pair.psi1 : pair.phi1, opt.from_super ? pair.psi2 : pair.phi2,
                      false, 0, {}, inf, inf, 0.0, 0.0, 0.0, lu, lv};
  const double dir = opt.from_super ? -1.0 : 1.0;

  auto inner = [&](const GridField& self, const std::vector<double>& rhs, double r, const CoefficientFunction& M,
                   double lambda) {
    EnergyTerms terms;
    terms.r = r;
    terms.M = M;
    terms.g_lambda = lambda;
    terms.g_exponent = e;
    terms.load.resize(d.interior().size());
    double scale = 0.0;
    for (std::size_t m = 0; m < terms.load.size(); ++m) {
      const std::size_t k = d.interior()[m];
      terms.load[m] = rhs[k] + g(lambda, self.values[k]);
      scale = std::max(scale, std::abs(terms.load[m]));
    }
    DirichletEnergy J(op, *aux.pre, terms);
    DescentOptions dopt;
    dopt.tol = opt.inner_tol;
    dopt.scale = std::max(scale, std::numeric_limits<double>::min());
    dopt.max_iter = 400;
    auto res = minimize(J, self.interior(), J.mass(), dopt);
    if (!res.converged)
      throw ConvergenceError("inner solve did not converge: residual " + fmt(res.gradient_norm));
    return GridField::from_interior(d, res.x);
  };

  auto check = [&](const GridField& prev, const GridField& next, const GridField& lo, const GridField& hi,
                   double& min_step, const char* which) {
    const double scale = std::max(sup_over(hi), std::numeric_limits<double>::min());
    double step = std::numeric_limits<double>::infinity(), esc = 0.0;
    for (std::size_t k = 0; k < next.values.size(); ++k) {
      step = std::min(step, dir * (next.values[k] - prev.values[k]) / scale);
      esc = std::max({esc, (lo.values[k] - next.values[k]) / scale, (next.values[k] - hi.values[k]) / scale});
    }
    min_step = std::min(min_step, step);
    sol.max_escape = std::max(sol.max_escape, esc);
    if (esc > opt.tol)
      throw InvariantViolation(std::string("iterate ") + which + " left the bracket by " + fmt(esc) +
                               " (relative) at iteration " + std::to_string(sol.iterations));
    if (step < -opt.tol)
      throw InvariantViolation(std::string("iterate ") + which + " moved against the monotone direction by " +
                               fmt(-step) + " (relative) at iteration " + std::to_string(sol.iterations));
  };

  for (int k = 1; k <= opt.max_iter; ++k) {
    const auto ru = rhs_nodes(at, aux, sol.u, sol.v, true);
    const auto rv = rhs_nodes(at, aux, sol.u, sol.v, false);
    GridField u1 = inner(sol.u, ru, at.p, at.M1, lu);
    GridField v1 = inner(sol.v, rv, at.q, at.M2, lv);
    sol.iterations = k;
    check(sol.u, u1, pair.phi1, pair.psi1, sol.min_step_u, "u");
    check(sol.v, v1, pair.phi2, pair.psi2, sol.min_step_v, "v");
    double du = 0.0, dv = 0.0;
    for (std::size_t i = 0; i < u1.values.size(); ++i) {
      du = std::max(du, std::abs(u1.values[i] - sol.u.values[i]));
      dv = std::max(dv, std::abs(v1.values[i] - sol.v.values[i]));
    }
    const double inc = std::max(du / std::max(u1.sup_norm(), 1e-300), dv / std::max(v1.sup_norm(), 1e-300));
    sol.increments.push_back(inc);
    sol.u = std::move(u1);
    sol.v = std::move(v1);
    if (inc <= opt.tol) {
      sol.converged = true;
      break;
    }
  }
  sol.residual_u = normalized_residual(op, sol.u, at.p, at.M1, rhs_nodes(at, aux, sol.u, sol.v, true));
  sol.residual_v = normalized_residual(op, sol.v, at.q, at.M2, rhs_nodes(at, aux, sol.u, sol.v, false));
  return sol;
}

}  // namespace hk
