#pragma once

// The coupled Kirchhoff system
//   M1(ρ_p(u))·A_p u = ζ·a·f(u, v),   M2(ρ_q(v))·A_q v = ζ·b·χ(u, v)   in Ω, u = v = 0 on ∂Ω,
// its explicit sub/supersolution pair, weak verification and the monotone iteration.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hk/coeff.hpp"
#include "hk/field.hpp"
#include "hk/precond.hpp"
#include "hk/spectral.hpp"
#include "hk/torsion.hpp"

namespace hk {

/// f(s, t) on [0,∞)², with a preset name for reports.
class Nonlinearity {
 public:
  using Fn = std::function<double(double, double)>;
  Nonlinearity(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  /// (s+t)^{1/2}
  static Nonlinearity sqrt_sum(double scale = 1.0);
  /// (s+t)²
  static Nonlinearity square_sum();
  /// (s+t)^e
  static Nonlinearity power_sum(double e);
  static Nonlinearity constant(double c);
  static Nonlinearity zero();
  /// "sqrt_sum", "square_sum", "power_sum:e", "const:c", "zero", "scaled_sqrt_sum:k".
  static Nonlinearity parse(const std::string& spec);

  double operator()(double s, double t) const { return fn_(s, t); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

/// Weight a(x, y) on Ω̄.
class WeightFunction {
 public:
  using Fn = std::function<double(double, double)>;
  WeightFunction(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  static WeightFunction constant(double c);
  /// a0 + amp·16·x(T−x)y(T−y)/T⁴ (1D: a0 + amp·4x(T−x)/T²).
  static WeightFunction bump(double a0, double amp, double T, int dim);
  /// "const:c" or "bump:a0,amp".
  static WeightFunction parse(const std::string& spec, double T, int dim);

  double operator()(double x, double y) const { return fn_(x, y); }
  const std::string& name() const noexcept { return name_; }
  /// Values at every node.
  std::vector<double> sample(const Domain& d) const;

 private:
  std::string name_;
  Fn fn_;
};

struct KirchhoffInstance {
  double p = 3.0;
  double q = 2.0;
  double zeta = 1.0;
  double k0 = 1.0;
  CoefficientFunction M1 = CoefficientFunction::affine(2.0, 1.0);
  CoefficientFunction M2 = CoefficientFunction::affine(1.0, 1.0);
  WeightFunction a = WeightFunction::constant(1.0);
  WeightFunction b = WeightFunction::constant(1.0);
  Nonlinearity f = Nonlinearity::sqrt_sum();
  Nonlinearity chi = Nonlinearity::sqrt_sum();
  double alpha = 0.75;
  double beta = 0.5;
  PsiMap psi = PsiMap::identity();

  /// p = 3, q = 2, α = 0.75, β = 0.5, ψ = id, a = b = 1, M1 = 2+t, M2 = 1+t,
  /// f = χ = (s+t)^{1/2}, k0 = 1.
  static KirchhoffInstance demo();

  FracParams params() const { return FracParams{alpha, beta, q}; }
  /// Throws ParameterError unless p > q > 1, ζ > 0, k0 > 0 and 1/q < α < 1.
  void validate() const;

  /// Values below zero are extended by f(max(s,0), max(t,0)) and clipped at −k0/a0.
  double f_ext(double s, double t, double a0) const;
  double chi_ext(double s, double t, double b0) const;
};

struct HypothesisCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct HypothesisReport {
  bool ok = false;
  std::vector<HypothesisCheck> checks;
  /// Always true: limits are judged on finite samples.
  bool sampled_not_proven = true;
};

struct HypothesisOptions {
  /// Geometric sample grid t ∈ {t_min, 10·t_min, …, t_max}.
  double t_min = 1.0;
  double t_max = 1e6;
  /// The free constant 𝔐 of the H4 ratio.
  double frak_m = 1.0;
  /// Auxiliary g of the monotone iteration, sampled for HK2.
  double g_lambda = 0.0;
};

/// Numeric verdicts for H1–H5 and HK1–HK2 on the domain's nodes and the sample grid.
HypothesisReport check_hypotheses(const KirchhoffInstance& inst, const Domain& d,
                                  const HypothesisOptions& opt = {});

/// Everything the construction needs that does not depend on ζ or c.
struct Auxiliary {
  std::shared_ptr<const GradientOperator> op;
  std::shared_ptr<const SeparablePreconditioner> pre;
  EigenPair eig_p, eig_q;
  BarrierConstants bar_p, bar_q;
  double m = 0.0;      ///< min(m_p, m_q)
  double delta = 0.0;  ///< common strip width
  double sigma = 0.0;  ///< min(σ_p, σ_q)
  TorsionSolution tor_p, tor_q;
  std::vector<double> a_nodes, b_nodes;
  double a0 = 0.0, b0 = 0.0, a_sup = 0.0, b_sup = 0.0;
};

struct AuxiliaryOptions {
  EigenOptions eigen;
  TorsionOptions torsion;
  /// Empty: {0.05T, 0.1T, 0.2T}. The first δ with m > 0 for both exponents is kept.
  std::vector<double> delta_candidates;
};

/// Throws ConstructionError when no candidate δ gives a positive gap for both exponents.
Auxiliary compute_auxiliary(const KirchhoffInstance& inst, const Domain& d, const AuxiliaryOptions& opt = {});

enum class SubMode {
  /// K_i solves K^{r−1}·M_i(ρ_r(Φ_i)) = ζk0/m, so the Kirchhoff factor is absorbed exactly.
  self_consistent,
  /// K_i^{r−1} = ζk0/(m·m_i), M_i replaced by its lower bound.
  lower_bound,
};
SubMode parse_sub_mode(const std::string& s);
std::string sub_mode_name(SubMode m);

struct SubSuperPair {
  GridField phi1, phi2, psi1, psi2;
  double zeta = 0.0;
  double c = 0.0;
  double K1 = 0.0, K2 = 0.0;  ///< Φ_i = ((r−1)/r)·K_i·Θ^{r/(r−1)}
  double m = 0.0, delta = 0.0, sigma = 0.0;
  double lp = 0.0, lq = 0.0;
  double lambda1p = 0.0, lambda1q = 0.0;
};

/// (Φ1, Φ2) from the eigenfunctions. Throws ConstructionError if m ≤ 0.
std::pair<GridField, GridField> construct_subsolution(const KirchhoffInstance& inst, const Auxiliary& aux,
                                                      SubMode mode, double* K1 = nullptr,
                                                      double* K2 = nullptr);

/// (Ψ1, Ψ2) from the torsion functions. Throws ConstructionError for c ≤ 0 or χ ≤ 0 at
/// the evaluation point.
std::pair<GridField, GridField> construct_supersolution(const KirchhoffInstance& inst, const Auxiliary& aux,
                                                        double c);

SubSuperPair construct_pair(const KirchhoffInstance& inst, const Auxiliary& aux, double c,
                            SubMode mode = SubMode::self_consistent);

struct FindCResult {
  bool found = false;
  double c = 0.0;
  int doublings = 0;
  /// lhs/rhs of the Ψ1 condition and S/sup Ψ2 (both ≥ 1 on success).
  double ratio1 = 0.0;
  double ratio2 = 0.0;
};

/// Doubling search from c = 1 for the two scalar supersolution conditions
///   (m1/l_p^{p−1})·c^{p−1} ≥ f(S, sup Ψ2)  and  sup Ψ2 ≤ S,  S = c(ζ‖a‖)^{1/(p−1)}.
FindCResult find_c(const KirchhoffInstance& inst, const Auxiliary& aux, int max_doublings = 200);

struct Verdict {
  std::string name;  ///< "sub1", "sub2", "super1", "super2", "order1", "order2"
  bool ok = false;
  /// Worst normalized residual (sub: max, super: −min); ok when ≤ tol.
  double margin = 0.0;
  std::size_t worst_test = 0;
  double worst_x = 0.0, worst_y = 0.0;
};

struct VerifyReport {
  bool ok = false;
  std::vector<Verdict> verdicts;
  bool sub_ok() const;
  bool super_ok() const;
  bool order_ok() const;
};

/// Sub residual_j = M1(ρ_p(Φ1))·a_j(Φ1) − ∫ζ·a·f(Φ1,Φ2)w_j must be ≤ tol·scale_j, super
/// residuals ≥ −tol·scale_j, with scale_j the sum of the two terms' magnitudes. Also
/// Φi ≤ Ψi nodewise.
VerifyReport verify_pair(const KirchhoffInstance& inst, const Auxiliary& aux, const SubSuperPair& pair,
                         const TestCone& cone, double tol = 1e-8);

struct ZetaSearchStep {
  double zeta = 0.0;
  double c = 0.0;
  bool sub_ok = false, super_ok = false, order_ok = false;
};

struct ZetaSearchResult {
  bool found = false;
  double zeta_star = 0.0;
  std::optional<SubSuperPair> pair;
  VerifyReport report;
  std::vector<ZetaSearchStep> history;
};

struct ZetaSearchOptions {
  double zeta0 = 1.0;
  int max_doublings = 200;
  int c_doublings = 200;
  double tol = 1e-8;
  SubMode mode = SubMode::self_consistent;
};

/// Doubling search on ζ; at each ζ, c comes from find_c and is doubled further while
/// Φ ≤ Ψ fails. Returns the first ζ whose pair verifies.
ZetaSearchResult find_zeta_star(const KirchhoffInstance& inst, const Auxiliary& aux,
                                const ZetaSearchOptions& opt = {});

struct IterationOptions {
  double tol = 1e-8;  ///< on ‖Δ‖∞ relative to ‖u‖∞
  int max_iter = 200;
  /// Multiplies the default auxiliary constant λ of g(s) = λ|s|^{min(p,q)−2}s.
  double g_scale = 1.0;
  double inner_tol = 1e-11;
  bool from_super = false;
};

struct BracketSolution {
  GridField u, v;
  bool converged = false;
  int iterations = 0;
  std::vector<double> increments;  ///< ‖(Δu, Δv)‖∞ relative, per iteration
  double min_step_u = 0.0, min_step_v = 0.0;  ///< least signed step over all iterations (normalized)
  double max_escape = 0.0;                    ///< worst relative bracket excursion
  double residual_u = 0.0, residual_v = 0.0;  ///< normalized weak residuals at (u, v)
  double g_lambda_u = 0.0, g_lambda_v = 0.0;
};

/// λ of the auxiliary g: ζ‖a‖∞ times the largest decrease rate of f over the bracket
/// (0 for nondecreasing f), times g_scale.
double auxiliary_g_lambda(const KirchhoffInstance& inst, const Auxiliary& aux, const SubSuperPair& pair,
                          bool first, double g_scale = 1.0);

/// From (Φ1, Φ2) (or (Ψ1, Ψ2) with from_super), u_{k+1} minimizes
///   (1/p)M̂1(ρ_p(u)) + ∫G(u) − ∫(ζ·a·f(u_k, v_k) + g(u_k))·u,
/// and likewise for v. Throws InvariantViolation when an iterate leaves the bracket or
/// steps against the monotone direction by more than tol.
BracketSolution monotone_iteration(const KirchhoffInstance& inst, const Auxiliary& aux,
                                   const SubSuperPair& pair, const IterationOptions& opt = {});

/// max_j |M(ρ)a_j(u) − ∫ζ·w·F w_j| / max_j(|M(ρ)a_j(u)| + |∫ζ·w·F w_j|) for one equation.
double normalized_residual(const GradientOperator& op, const GridField& u, double r,
                           const CoefficientFunction& M, const std::vector<double>& rhs_nodes);

}  // namespace hk
