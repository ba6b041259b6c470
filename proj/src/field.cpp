#include "hk/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hk/errors.hpp"
#include "hk/kernels.hpp"

namespace hk {

void check_exponent(double r) {
  if (!(r > 1.0) || !std::isfinite(r))
    throw ParameterError("exponent r must satisfy r > 1 (got " + std::to_string(r) + ")");
}

// ---- Domain ---------------------------------------------------------------------------

Domain Domain::make(int dim, Grid1D gx, Grid1D gy) {
  const std::size_t nx = gx.size();
  const std::size_t ny = dim == 2 ? gy.size() : 1;
  const auto wx = gx.trapezoid_weights();
  const auto wy = gy.trapezoid_weights();
  std::vector<double> w(nx * ny);
  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      w[i * ny + j] = dim == 2 ? wx[i] * wy[j] : wx[i];
      const bool inner_x = i > 0 && i + 1 < nx;
      const bool inner_y = dim == 1 || (j > 0 && j + 1 < ny);
      if (inner_x && inner_y) interior.push_back(i * ny + j);
    }
  }
  return Domain(std::make_shared<const Impl>(
      Impl{dim, std::move(gx), std::move(gy), std::move(w), std::move(interior)}));
}

Domain Domain::square(double T, std::size_t n, double grading) {
  auto g = Grid1D::graded(T, n, grading);
  return make(2, g, g);
}

Domain Domain::interval(double T, std::size_t n, double grading) {
  auto g = Grid1D::graded(T, n, grading);
  return make(1, g, g);
}

Domain Domain::rectangle(Grid1D gx, Grid1D gy) { return make(2, std::move(gx), std::move(gy)); }

Domain Domain::line(Grid1D gx) {
  Grid1D copy = gx;
  return make(1, std::move(gx), std::move(copy));
}

bool Domain::on_boundary(std::size_t k) const noexcept {
  const std::size_t i = k / ny();
  if (i == 0 || i + 1 == nx()) return true;
  if (dim() == 1) return false;
  const std::size_t j = k % ny();
  return j == 0 || j + 1 == ny();
}

double Domain::boundary_distance(std::size_t k) const noexcept {
  const double xv = x(k);
  double d = std::min(xv, gx().length() - xv);
  if (dim() == 2) {
    const double yv = y(k);
    d = std::min(d, std::min(yv, gy().length() - yv));
  }
  return d;
}

std::vector<double> Domain::restrict_interior(std::span<const double> full) const {
  if (full.size() != size()) throw SizeError("field size does not match the domain");
  std::vector<double> out(interior().size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = full[interior()[m]];
  return out;
}

std::vector<double> Domain::extend(std::span<const double> interior_values) const {
  if (interior_values.size() != interior().size())
    throw SizeError("interior vector size does not match the domain");
  std::vector<double> out(size(), 0.0);
  for (std::size_t m = 0; m < interior_values.size(); ++m) out[interior()[m]] = interior_values[m];
  return out;
}

bool operator==(const Domain& a, const Domain& b) {
  if (a.impl_ == b.impl_) return true;
  if (a.dim() != b.dim() || !(a.gx() == b.gx())) return false;
  return a.dim() == 1 || a.gy() == b.gy();
}

// ---- GridField ------------------------------------------------------------------------

GridField GridField::zero(const Domain& d) { return GridField{d, std::vector<double>(d.size(), 0.0)}; }

GridField GridField::sample(const Domain& d, const std::function<double(double, double)>& fn) {
  GridField f = zero(d);
  for (std::size_t k : d.interior()) f.values[k] = fn(d.x(k), d.y(k));
  return f;
}

GridField GridField::from_interior(const Domain& d, std::span<const double> interior_values) {
  return GridField{d, d.extend(interior_values)};
}

bool GridField::has_zero_trace() const {
  for (std::size_t k = 0; k < values.size(); ++k)
    if (domain.on_boundary(k) && values[k] != 0.0) return false;
  return true;
}

double GridField::max() const { return *std::max_element(values.begin(), values.end()); }
double GridField::min() const { return *std::min_element(values.begin(), values.end()); }

double GridField::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

// ---- TestCone -------------------------------------------------------------------------

TestCone TestCone::interior(const Domain& d) { return TestCone(d, d.interior()); }

TestCone TestCone::of_nodes(const Domain& d, std::vector<std::size_t> nodes) {
  for (std::size_t k : nodes) {
    if (k >= d.size() || d.on_boundary(k))
      throw ParameterError("test hats must sit at interior nodes (node " + std::to_string(k) + ")");
  }
  return TestCone(d, std::move(nodes));
}

GridField TestCone::hat(std::size_t j) const {
  GridField h = GridField::zero(domain_);
  h.values[node(j)] = 1.0;
  return h;
}

// ---- GradientOperator -----------------------------------------------------------------

GradientOperator::GradientOperator(Domain d, const FracParams& params, const PsiMap& psi)
    : domain_(std::move(d)), params_(params), psi_(psi) {
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    throw ParameterError("order alpha must lie in (0,1)");
  const auto ox = StaggeredOperators1D::build(domain_.gx(), psi, params);
  dlx_ = AxisOperator(ox.D_left);
  drx_ = AxisOperator(ox.D_right);
  const std::size_t nx = domain_.nx(), ny = domain_.ny();
  wdx_.resize((nx - 1) * ny);
  if (domain_.dim() == 1) {
    wdx_ = ox.widths;
    return;
  }
  const auto oy = domain_.gy() == domain_.gx() ? ox : StaggeredOperators1D::build(domain_.gy(), psi, params);
  if (domain_.gy() == domain_.gx()) {
    dly_ = dlx_;
    dry_ = drx_;
  } else {
    dly_ = AxisOperator(oy.D_left);
    dry_ = AxisOperator(oy.D_right);
  }
  const auto wx = domain_.gx().trapezoid_weights();
  const auto wy = domain_.gy().trapezoid_weights();
  for (std::size_t c = 0; c + 1 < nx; ++c)
    for (std::size_t j = 0; j < ny; ++j) wdx_[c * ny + j] = ox.widths[c] * wy[j];
  wdy_.resize(nx * (ny - 1));
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t c = 0; c + 1 < ny; ++c) wdy_[i * (ny - 1) + c] = wx[i] * oy.widths[c];
}

void GradientOperator::check(const GridField& f) const {
  if (!(f.domain == domain_)) throw GridMismatchError("field and operator live on different grids");
  if (f.values.size() != domain_.size()) throw SizeError("field size does not match its domain");
}

void GradientOperator::gradient(std::span<const double> u, std::span<double> dx,
                                std::span<double> dy) const {
  if (u.size() != domain_.size()) throw SizeError("field size does not match the domain");
  kernels::apply_x(dlx_.matrix, dlx_.support, u, dx, domain_.ny());
  if (domain_.dim() == 2) kernels::apply_y(dly_.matrix, dly_.support, u, dy, domain_.nx());
}

FracGradient2D GradientOperator::gradient_raw(std::span<const double> u) const {
  FracGradient2D g;
  g.dx.assign(wdx_.size(), 0.0);
  g.dy.assign(wdy_.size(), 0.0);
  gradient(u, g.dx, g.dy);
  return g;
}

FracGradient2D GradientOperator::gradient(const GridField& u) const {
  check(u);
  return gradient_raw(u.values);
}

FracGradient2D GradientOperator::nodal_gradient(const GridField& u) const {
  const auto g = gradient(u);
  const std::size_t nx = domain_.nx(), ny = domain_.ny();
  FracGradient2D out;
  out.dx.assign(nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double left = i > 0 ? g.dx[(i - 1) * ny + j] : g.dx[i * ny + j];
      const double right = i + 1 < nx ? g.dx[i * ny + j] : g.dx[(i - 1) * ny + j];
      out.dx[i * ny + j] = 0.5 * (left + right);
    }
  }
  if (domain_.dim() == 2) {
    out.dy.assign(nx * ny, 0.0);
    const std::size_t cy = ny - 1;
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        const double lo = j > 0 ? g.dy[i * cy + j - 1] : g.dy[i * cy + j];
        const double hi = j + 1 < ny ? g.dy[i * cy + j] : g.dy[i * cy + j - 1];
        out.dy[i * ny + j] = 0.5 * (lo + hi);
      }
    }
  }
  return out;
}

double GradientOperator::modular_of_gradient(const FracGradient2D& g, double r) const {
  check_exponent(r);
  const std::size_t nx = domain_.nx(), ny = domain_.ny();
  double s = kernels::weighted_abs_pow_sum(wdx_, g.dx, r, nx - 1, ny);
  if (domain_.dim() == 2) s += kernels::weighted_abs_pow_sum(wdy_, g.dy, r, nx, ny - 1);
  return s;
}

double GradientOperator::modular(std::span<const double> u, double r) const {
  check_exponent(r);
  return modular_of_gradient(gradient_raw(u), r);
}

double GradientOperator::modular(const GridField& u, double r) const {
  check(u);
  return modular(std::span<const double>(u.values), r);
}

double GradientOperator::norm(const GridField& u, double r) const {
  check(u);
  const auto& w = domain_.weights();
  double lr = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) lr += w[k] * std::pow(std::abs(u.values[k]), r);
  return std::pow(lr, 1.0 / r) + std::pow(modular(u, r), 1.0 / r);
}

std::vector<double> GradientOperator::flux_divergence(const FracGradient2D& g, double r) const {
  check_exponent(r);
  const std::size_t nx = domain_.nx(), ny = domain_.ny();
  std::vector<double> flux(wdx_.size()), out(domain_.size());
  kernels::weighted_flux(wdx_, g.dx, r, flux);
  kernels::apply_x(dlx_.transpose, dlx_.transpose_support, flux, out, ny);
  if (domain_.dim() == 2) {
    std::vector<double> fy(wdy_.size()), tmp(domain_.size());
    kernels::weighted_flux(wdy_, g.dy, r, fy);
    kernels::apply_y(dly_.transpose, dly_.transpose_support, fy, tmp, nx);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += tmp[k];
  }
  return out;
}

std::vector<double> GradientOperator::flux_divergence(std::span<const double> u, double r) const {
  return flux_divergence(gradient_raw(u), r);
}

double GradientOperator::pairing(const GridField& u, const GridField& v, double r) const {
  check_exponent(r);
  check(u);
  check(v);
  const auto gu = gradient(u);
  const auto gv = gradient(v);
  const std::size_t nx = domain_.nx(), ny = domain_.ny();
  std::vector<double> flux(wdx_.size());
  kernels::weighted_flux(wdx_, gu.dx, r, flux);
  double s = kernels::weighted_sum(flux, gv.dx, nx - 1, ny);
  if (domain_.dim() == 2) {
    std::vector<double> fy(wdy_.size());
    kernels::weighted_flux(wdy_, gu.dy, r, fy);
    s += kernels::weighted_sum(fy, gv.dy, nx, ny - 1);
  }
  return s;
}

std::vector<double> GradientOperator::weak_residual(const GridField& u, double r, double coeff,
                                                    const GridField& rhs,
                                                    const TestCone& cone) const {
  check_exponent(r);
  check(u);
  check(rhs);
  if (cone.empty()) throw ParameterError("test cone is empty");
  if (!(cone.domain() == domain_)) throw GridMismatchError("test cone lives on a different grid");
  const auto a = flux_divergence(std::span<const double>(u.values), r);
  const auto& w = domain_.weights();
  std::vector<double> res(cone.size());
  for (std::size_t j = 0; j < cone.size(); ++j) {
    const std::size_t k = cone.node(j);
    res[j] = coeff * a[k] - w[k] * rhs.values[k];
  }
  return res;
}

GridField GradientOperator::strong_apply(const GridField& u, double r) const {
  check_exponent(r);
  check(u);
  const std::size_t nx = domain_.nx(), ny = domain_.ny();
  const auto g = gradient(u);
  const std::vector<double> ones(std::max(wdx_.size(), wdy_.size()), 1.0);
  GridField out = GridField::zero(domain_);
  std::vector<double> flux(wdx_.size());
  kernels::weighted_flux(std::span<const double>(ones).first(wdx_.size()), g.dx, r, flux);
  kernels::apply_x(drx_.matrix, drx_.support, flux, out.values, ny);
  if (domain_.dim() == 2) {
    std::vector<double> fy(wdy_.size()), tmp(domain_.size());
    kernels::weighted_flux(std::span<const double>(ones).first(wdy_.size()), g.dy, r, fy);
    kernels::apply_y(dry_.matrix, dry_.support, fy, tmp, nx);
    for (std::size_t k = 0; k < tmp.size(); ++k) out.values[k] += tmp[k];
  }
  return out;
}

}  // namespace hk
