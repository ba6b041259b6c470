#include "hk/psi.hpp"

#include <cmath>
#include <sstream>

#include "hk/errors.hpp"

namespace hk {

PsiMap PsiMap::power(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("power ψ needs γ > 0");
  return PsiMap(Kind::power, gamma);
}

PsiMap PsiMap::logarithmic(double shift) {
  if (!(shift > 0.0) || !std::isfinite(shift)) throw ParameterError("logarithmic ψ needs shift > 0");
  return PsiMap(Kind::logarithmic, shift);
}

double PsiMap::operator()(double xi) const {
  switch (kind_) {
    case Kind::identity:
      return xi;
    case Kind::power:
      return std::pow(xi, param_);
    case Kind::logarithmic:
      return std::log(xi + param_);
  }
  return xi;
}

double PsiMap::derivative(double xi) const {
  switch (kind_) {
    case Kind::identity:
      return 1.0;
    case Kind::power:
      return param_ * std::pow(xi, param_ - 1.0);
    case Kind::logarithmic:
      return 1.0 / (xi + param_);
  }
  return 1.0;
}

std::string PsiMap::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::power:
      os << "power(" << param_ << ")";
      return os.str();
    case Kind::logarithmic:
      os << "log(" << param_ << ")";
      return os.str();
  }
  return "?";
}

std::vector<double> PsiMap::sample(const Grid1D& g) const {
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = (*this)(g[i]);
  return u;
}

void PsiMap::validate_on(const Grid1D& g) const {
  const auto u = sample(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]))
      throw KernelDomainError(name() + " is not finite at node " + std::to_string(i));
    if (i > 0 && !(u[i] > u[i - 1]))
      throw KernelDomainError(name() + " is not strictly increasing at node " + std::to_string(i));
    if (i > 0 && i + 1 < u.size() && !(derivative(g[i]) > 0.0))
      throw KernelDomainError(name() + " has non-positive derivative at node " + std::to_string(i));
  }
}

}  // namespace hk
