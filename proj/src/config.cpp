#include "hk/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hk/errors.hpp"

namespace hk {

namespace {

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d{
      {"domain.T", "1"},
      {"domain.dim", "2"},
      {"grid.n", "32"},
      {"grid.grading", "1"},
      {"frac.alpha", "0.75"},
      {"frac.beta", "0.5"},
      {"psi.kind", "identity"},
      {"psi.gamma", "1"},
      {"problem.p", "3"},
      {"problem.q", "2"},
      {"problem.zeta", "1"},
      {"problem.k0", "1"},
      {"coeff.M1", "affine:2,1"},
      {"coeff.M2", "affine:1,1"},
      {"weights.a", "const:1"},
      {"weights.b", "const:1"},
      {"nonlin.f", "sqrt_sum"},
      {"nonlin.chi", "sqrt_sum"},
      {"solver.tol", "1e-8"},
      {"solver.max_iter", "200"},
      {"solver.g_scale", "1"},
      {"solver.from_super", "false"},
      {"sub.mode", "self_consistent"},
      {"construct.c", "0"},
      {"search.enabled", "false"},
      {"search.zeta0", "1"},
      {"search.max_doublings", "200"},
      {"search.c_doublings", "200"},
      {"hypotheses.enforce", "true"},
      {"eigen.r", ""},
      {"torsion.r", ""},
      {"ops.n", "512"},
      {"reduce.alpha", "0.999"},
      {"reduce.n1d", "255"},
      {"sweep.param", "zeta"},
      {"sweep.values", ""},
      {"seed", "1"},
  };
  return d;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_number(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": not a number: '" + v + "'");
  return x;
}

// Wraps a constructor call so errors name the key that produced them.
template <class F>
auto keyed(const std::string& key, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace

RunConfig::RunConfig() : entries_(defaults()) {}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    cfg.set(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void RunConfig::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not KEY=VALUE");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown key '" + key + "'");
  it->second = value;
}

const std::string& RunConfig::str(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const { return to_number(key, str(key)); }

long RunConfig::integer(const std::string& key) const {
  const double x = number(key);
  if (x != std::floor(x) || std::abs(x) > 1e15) throw ConfigError(key + ": not an integer: '" + str(key) + "'");
  return static_cast<long>(x);
}

bool RunConfig::flag(const std::string& key) const {
  const auto& v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(str(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_number(key, item));
  }
  return out;
}

Domain RunConfig::domain() const {
  const double T = number("domain.T");
  const long dim = integer("domain.dim");
  const long n = integer("grid.n");
  const double g = number("grid.grading");
  if (!(T > 0.0)) throw ConfigError("domain.T: must be positive");
  if (dim != 1 && dim != 2) throw ConfigError("domain.dim: must be 1 or 2");
  if (n < 4) throw ConfigError("grid.n: must be at least 4");
  if (!(g >= 1.0)) throw ConfigError("grid.grading: must be at least 1");
  const auto nn = static_cast<std::size_t>(n);
  return keyed("grid", [&] { return dim == 2 ? Domain::square(T, nn, g) : Domain::interval(T, nn, g); });
}

PsiMap RunConfig::psi() const {
  const auto& kind = str("psi.kind");
  const double gamma = number("psi.gamma");
  if (kind == "identity") return PsiMap::identity();
  if (kind == "power") return keyed("psi.gamma", [&] { return PsiMap::power(gamma); });
  if (kind == "log") return keyed("psi.gamma", [&] { return PsiMap::logarithmic(gamma); });
  throw ConfigError("psi.kind: unknown preset '" + kind + "' (identity, power, log)");
}

KirchhoffInstance RunConfig::instance() const {
  KirchhoffInstance inst;
  inst.p = number("problem.p");
  inst.q = number("problem.q");
  inst.zeta = number("problem.zeta");
  inst.k0 = number("problem.k0");
  inst.alpha = number("frac.alpha");
  inst.beta = number("frac.beta");
  inst.psi = psi();
  inst.M1 = keyed("coeff.M1", [&] { return CoefficientFunction::parse(str("coeff.M1")); });
  inst.M2 = keyed("coeff.M2", [&] { return CoefficientFunction::parse(str("coeff.M2")); });
  const double T = number("domain.T");
  const int dim = static_cast<int>(integer("domain.dim"));
  inst.a = keyed("weights.a", [&] { return WeightFunction::parse(str("weights.a"), T, dim); });
  inst.b = keyed("weights.b", [&] { return WeightFunction::parse(str("weights.b"), T, dim); });
  inst.f = keyed("nonlin.f", [&] { return Nonlinearity::parse(str("nonlin.f")); });
  inst.chi = keyed("nonlin.chi", [&] { return Nonlinearity::parse(str("nonlin.chi")); });
  keyed("problem", [&] {
    inst.validate();
    return 0;
  });
  return inst;
}

AuxiliaryOptions RunConfig::auxiliary_options() const {
  AuxiliaryOptions opt;
  opt.eigen.seed = seed();
  return opt;
}

SubMode RunConfig::sub_mode() const {
  return keyed("sub.mode", [&] { return parse_sub_mode(str("sub.mode")); });
}

std::uint64_t RunConfig::seed() const {
  const long s = integer("seed");
  if (s < 0) throw ConfigError("seed: must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

void RunConfig::validate() const {
  domain();
  instance();
  sub_mode();
  seed();
  if (!(number("solver.tol") > 0.0)) throw ConfigError("solver.tol: must be positive");
  if (integer("solver.max_iter") < 1) throw ConfigError("solver.max_iter: must be positive");
  if (!(number("solver.g_scale") >= 0.0)) throw ConfigError("solver.g_scale: must be nonnegative");
  flag("solver.from_super");
  flag("search.enabled");
  flag("hypotheses.enforce");
  if (number("construct.c") < 0.0) throw ConfigError("construct.c: must be nonnegative (0 searches)");
  if (!(number("search.zeta0") > 0.0)) throw ConfigError("search.zeta0: must be positive");
  if (integer("search.max_doublings") < 0) throw ConfigError("search.max_doublings: must be nonnegative");
  if (integer("search.c_doublings") < 0) throw ConfigError("search.c_doublings: must be nonnegative");
  for (const char* key : {"eigen.r", "torsion.r"})
    for (double r : numbers(key))
      if (!(r > 1.0)) throw ConfigError(std::string(key) + ": exponents must exceed 1");
  if (integer("ops.n") < 8) throw ConfigError("ops.n: must be at least 8");
  const double ra = number("reduce.alpha");
  if (!(ra > 0.5 && ra < 1.0)) throw ConfigError("reduce.alpha: must lie in (1/2, 1)");
  if (integer("reduce.n1d") < 8) throw ConfigError("reduce.n1d: must be at least 8");
  const auto& sp = str("sweep.param");
  if (sp != "zeta" && sp != "alpha") throw ConfigError("sweep.param: unknown parameter '" + sp + "' (zeta, alpha)");
  numbers("sweep.values");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : entries_) j[k] = v;
  return j;
}

}  // namespace hk
