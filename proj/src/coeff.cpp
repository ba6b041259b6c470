#include "hk/coeff.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "hk/errors.hpp"

namespace hk {

namespace {

double simpson(const CoefficientFunction::Fn& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

std::vector<double> numbers_after_colon(const std::string& spec, std::size_t expected) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("coefficient preset needs parameters: '" + spec + "'");
  std::vector<double> out;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw ConfigError("bad number '" + item + "' in '" + spec + "'");
    } catch (const std::logic_error&) {
      throw ConfigError("bad number '" + item + "' in '" + spec + "'");
    }
  }
  if (out.size() != expected)
    throw ConfigError("preset '" + spec + "' needs " + std::to_string(expected) + " parameters");
  return out;
}

}  // namespace

CoefficientFunction::CoefficientFunction(std::string name, Fn value)
    : name_(std::move(name)), value_(std::move(value)) {}

CoefficientFunction CoefficientFunction::affine(double a, double b) {
  std::ostringstream os;
  os << "affine:" << a << ',' << b;
  CoefficientFunction c(os.str(), [a, b](double t) { return a + b * t; });
  c.derivative_ = [b](double) { return b; };
  c.antiderivative_ = [a, b](double t) { return a * t + 0.5 * b * t * t; };
  return c;
}

CoefficientFunction CoefficientFunction::constant(double a) {
  std::ostringstream os;
  os << "const:" << a;
  CoefficientFunction c(os.str(), [a](double) { return a; });
  c.derivative_ = [](double) { return 0.0; };
  c.antiderivative_ = [a](double t) { return a * t; };
  return c;
}

CoefficientFunction CoefficientFunction::saturating(double a, double b) {
  std::ostringstream os;
  os << "saturating:" << a << ',' << b;
  CoefficientFunction c(os.str(), [a, b](double t) { return a + b * t / (1.0 + t); });
  c.derivative_ = [b](double t) { return b / ((1.0 + t) * (1.0 + t)); };
  c.antiderivative_ = [a, b](double t) { return a * t + b * (t - std::log1p(t)); };
  return c;
}

CoefficientFunction CoefficientFunction::parse(const std::string& spec) {
  const std::string kind = spec.substr(0, spec.find(':'));
  if (kind == "affine") {
    const auto v = numbers_after_colon(spec, 2);
    return affine(v[0], v[1]);
  }
  if (kind == "const") return constant(numbers_after_colon(spec, 1)[0]);
  if (kind == "saturating") {
    const auto v = numbers_after_colon(spec, 2);
    return saturating(v[0], v[1]);
  }
  throw ConfigError("unknown coefficient preset '" + kind + "'");
}

double CoefficientFunction::derivative(double t) const {
  if (derivative_) return (*derivative_)(t);
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  if (t - h < 0.0) return (value_(t + h) - value_(t)) / h;
  return (value_(t + h) - value_(t - h)) / (2.0 * h);
}

double CoefficientFunction::antiderivative_quadrature(double t) const {
  if (t == 0.0) return 0.0;
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("antiderivative needs t ≥ 0");
  const double fa = value_(0.0), fb = value_(t), fm = value_(0.5 * t);
  const double whole = t / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = 1e-10 * std::max(std::abs(whole), 1e-300);
  return simpson(value_, 0.0, t, fa, fm, fb, whole, tol, 50);
}

double CoefficientFunction::antiderivative(double t) const {
  if (antiderivative_) return (*antiderivative_)(t);
  return antiderivative_quadrature(t);
}

void CoefficientFunction::validate(double t_max) const {
  double prev = value_(0.0);
  if (!(prev > 0.0) || !std::isfinite(prev))
    throw HypothesisError("coefficient " + name_ + " is not positive at 0");
  for (double t = 1e-6; t <= t_max * (1.0 + 1e-12); t *= 1.5) {
    const double v = value_(t);
    if (!(v > 0.0) || !std::isfinite(v))
      throw HypothesisError("coefficient " + name_ + " is not positive at t=" + std::to_string(t));
    if (v < prev - 1e-12 * std::abs(prev))
      throw HypothesisError("coefficient " + name_ + " decreases near t=" + std::to_string(t));
    prev = v;
  }
}

}  // namespace hk
