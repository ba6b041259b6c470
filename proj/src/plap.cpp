#include "hk/plap.hpp"

#include <algorithm>
#include <cmath>

#include "hk/errors.hpp"

namespace hk {

PLapOperator::PLapOperator(const GradientOperator& op, double r) : op_(op), r_(r) { check_exponent(r); }

GridField PLapOperator::apply(const GridField& u) const { return op_.strong_apply(u, r_); }

double energy_Xi(const GradientOperator& op, const GridField& u, double r, const CoefficientFunction& M) {
  return M.antiderivative(op.modular(u, r)) / r;
}

double xi_derivative_pairing(const GradientOperator& op, const GridField& u, const GridField& v, double r,
                             const CoefficientFunction& M) {
  return M(op.modular(u, r)) * op.pairing(u, v, r);
}

std::string ComparisonResult::status_name() const {
  switch (status) {
    case Status::ordered:
      return "ordered";
    case Status::violation:
      return "violation";
    case Status::hypothesis_not_met:
      return "hypothesis-not-met";
  }
  return "?";
}

ComparisonResult comparison_check(const GradientOperator& op, const GridField& u1, const GridField& u2,
                                  double r, const CoefficientFunction& M, const TestCone& cone,
                                  double tol) {
  op.check(u1);
  op.check(u2);
  if (cone.empty()) throw ParameterError("test cone is empty");
  const auto a1 = op.flux_divergence(std::span<const double>(u1.values), r);
  const auto a2 = op.flux_divergence(std::span<const double>(u2.values), r);
  const double M1 = M(op.modular(u1, r));
  const double M2 = M(op.modular(u2, r));

  ComparisonResult res;
  double scale = 0.0;
  for (std::size_t k : cone.nodes()) scale = std::max({scale, std::abs(M1 * a1[k]), std::abs(M2 * a2[k])});
  res.hypothesis_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cone.size(); ++j) {
    const std::size_t k = cone.node(j);
    const double diff = M1 * a1[k] - M2 * a2[k];
    if (diff > res.hypothesis_margin) {
      res.hypothesis_margin = diff;
      res.worst_test = j;
    }
  }
  double pp = 0.0;
  for (std::size_t k : op.domain().interior()) {
    const double pos = std::max(u1.values[k] - u2.values[k], 0.0);
    pp += (M1 * a1[k] - M2 * a2[k]) * pos;
  }
  res.positive_part_pairing = pp;
  if (res.hypothesis_margin > tol * (scale + 1e-300)) {
    res.status = ComparisonResult::Status::hypothesis_not_met;
    return res;
  }
  const double ref = std::max(u1.sup_norm(), u2.sup_norm());
  for (std::size_t k : op.domain().interior())
    if (u1.values[k] > u2.values[k] + tol * ref) res.violating_nodes.push_back(k);
  res.status = res.violating_nodes.empty() ? ComparisonResult::Status::ordered
                                           : ComparisonResult::Status::violation;
  return res;
}

}  // namespace hk
