#include "hk/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hk/errors.hpp"

namespace hk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double scaled_sup(std::span<const double> g, std::span<const double> w) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(g[i]) / w[i]);
  return m;
}

// Truncated PCG for H d = -g. Stops at relative residual `forcing` or on loss of
// curvature; always returns a descent direction.
std::vector<double> newton_direction(const SmoothConvexObjective& obj, std::span<const double> g,
                                     const DescentOptions& opt) {
  const std::size_t n = g.size();
  std::vector<double> d(n, 0.0), r(n), z(n), p(n), Hp(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = -g[i];
  obj.precondition(r, z);
  p = z;
  double rz = dot(r, z);
  const double rz0 = rz;
  for (int it = 0; it < opt.cg_max_iter; ++it) {
    obj.hessian_times(p, Hp);
    const double pHp = dot(p, Hp);
    if (!(pHp > 0.0)) break;
    const double a = rz / pHp;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] += a * p[i];
      r[i] -= a * Hp[i];
    }
    obj.precondition(r, z);
    const double rz_new = dot(r, z);
    if (rz_new <= opt.cg_forcing * opt.cg_forcing * rz0) break;
    const double b = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + b * p[i];
  }
  if (dot(d, g) >= 0.0) {
    // fall back to the preconditioned gradient
    for (std::size_t i = 0; i < n; ++i) r[i] = -g[i];
    obj.precondition(r, d);
  }
  return d;
}

}  // namespace

DescentResult minimize(SmoothConvexObjective& obj, std::vector<double> x0,
                       std::span<const double> w, const DescentOptions& opt) {
  const std::size_t n = obj.size();
  if (x0.size() != n || w.size() != n) throw SizeError("minimize: size mismatch");
  DescentResult res;
  res.x = std::move(x0);
  std::vector<double> g(n), xt(n), gt(n), d(n);
  double E = obj.value(res.x);
  obj.gradient(res.x, g);
  res.energy_history.push_back(E);
  double gn = scaled_sup(g, w);
  const double target = opt.tol * opt.scale;
  for (int k = 0; k < opt.max_iter; ++k) {
    if (gn <= target) {
      res.converged = true;
      break;
    }
    obj.linearize(res.x);
    if (opt.newton) {
      d = newton_direction(obj, g, opt);
    } else {
      std::vector<double> mg(n);
      for (std::size_t i = 0; i < n; ++i) mg[i] = -g[i];
      obj.precondition(mg, d);
    }
    const double slope = dot(g, d);
    double t = 1.0;
    bool accepted = false;
    double Et = E, gnt = gn;
    for (int b = 0; b <= opt.max_backtracks; ++b) {
      for (std::size_t i = 0; i < n; ++i) xt[i] = res.x[i] + t * d[i];
      Et = obj.value(xt);
      const double slack = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(E) + 1e-300);
      if (std::isfinite(Et) && Et <= E + opt.armijo * t * slope + slack) {
        accepted = true;
        break;
      }
      t *= opt.backtrack;
    }
    if (!accepted) {
      // Near the minimum the energy difference drowns in roundoff; fall back to the
      // longest step of the backtracking sequence that reduces the gradient norm.
      bool reduced = false;
      for (int b = 0; b <= opt.max_backtracks && !reduced; ++b) {
        const double tb = std::pow(opt.backtrack, b);
        for (std::size_t i = 0; i < n; ++i) xt[i] = res.x[i] + tb * d[i];
        obj.gradient(xt, gt);
        gnt = scaled_sup(gt, w);
        reduced = gnt < gn;
      }
      if (!reduced) throw LineSearchError("line search failed at iteration " + std::to_string(k), t);
      Et = obj.value(xt);
    } else {
      obj.gradient(xt, gt);
      gnt = scaled_sup(gt, w);
    }
    res.x.swap(xt);
    g.swap(gt);
    E = Et;
    gn = gnt;
    res.iterations = k + 1;
    res.energy_history.push_back(E);
  }
  if (!res.converged && gn <= target) res.converged = true;
  res.gradient_norm = gn;
  return res;
}

}  // namespace hk
