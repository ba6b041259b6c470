#include "hk/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hk/config.hpp"
#include "hk/errors.hpp"
#include "hk/field_io.hpp"
#include "hk/identities.hpp"
#include "hk/kirchhoff.hpp"
#include "hk/reduction.hpp"

namespace hk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  std::string command;
  RunConfig cfg;
  fs::path dir;
  std::ostream& out;
  std::ostream& err;
};

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string short_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void write_report(const Context& ctx, const std::string& name, json body) {
  body["command"] = ctx.command;
  body["config"] = ctx.cfg.to_json();
  body["timestamp"] = timestamp();
  const auto path = ctx.dir / name;
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << body.dump(2) << '\n';
  ctx.out << "wrote " << path.string() << '\n';
}

void export_field(const Context& ctx, const std::string& name, const GridField& f) {
  save_field((ctx.dir / name).string(), f);
}

std::vector<double> exponents(const Context& ctx, const std::string& key) {
  auto rs = ctx.cfg.numbers(key);
  if (rs.empty()) {
    const auto inst = ctx.cfg.instance();
    rs = {inst.p, inst.q};
  }
  return rs;
}

json to_json(const HypothesisReport& h) {
  json checks = json::array();
  for (const auto& c : h.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return {{"ok", h.ok}, {"sampled_not_proven", h.sampled_not_proven}, {"checks", checks}};
}

json to_json(const Verdict& v) {
  return {{"name", v.name}, {"ok", v.ok}, {"margin", v.margin}, {"worst_test", v.worst_test},
          {"worst_x", v.worst_x}, {"worst_y", v.worst_y}};
}

json to_json(const FindCResult& fc) {
  return {{"found", fc.found}, {"c", fc.c}, {"doublings", fc.doublings}, {"ratio1", fc.ratio1}, {"ratio2", fc.ratio2}};
}

json pair_constants(const SubSuperPair& p) {
  return {{"zeta", p.zeta},     {"c", p.c},         {"K1", p.K1},     {"K2", p.K2},
          {"m", p.m},           {"delta", p.delta}, {"sigma", p.sigma}, {"lp", p.lp},
          {"lq", p.lq},         {"lambda1p", p.lambda1p}, {"lambda1q", p.lambda1q},
          {"sup_phi1", p.phi1.max()}, {"sup_phi2", p.phi2.max()},
          {"sup_psi1", p.psi1.max()}, {"sup_psi2", p.psi2.max()}};
}

void list_failures(const Context& ctx, const HypothesisReport& h) {
  for (const auto& c : h.checks)
    if (!c.ok) ctx.err << "hypothesis " << c.name << " failed: " << c.detail << '\n';
}

void list_failures(const Context& ctx, const VerifyReport& r) {
  for (const auto& v : r.verdicts)
    if (!v.ok)
      ctx.err << "verdict " << v.name << " failed: margin " << v.margin << " at test " << v.worst_test << " (x="
              << v.worst_x << ", y=" << v.worst_y << ")\n";
}

int ops_test(const Context& ctx) {
  const auto rep = operator_identity_suite(static_cast<std::size_t>(ctx.cfg.integer("ops.n")));
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"identity", c.identity}, {"psi", c.psi}, {"error", c.error}, {"tolerance", c.tolerance},
                      {"ok", c.ok}});
    ctx.out << (c.ok ? "ok   " : "FAIL ") << c.identity << " psi=" << c.psi << " error=" << c.error
            << " tol=" << c.tolerance << '\n';
  }
  write_report(ctx, "ops_test.json", {{"n", rep.n}, {"ok", rep.ok}, {"checks", checks}});
  return rep.ok ? ok : verdict_failed;
}

int eigen(const Context& ctx) {
  const auto d = ctx.cfg.domain();
  const double alpha = ctx.cfg.number("frac.alpha"), beta = ctx.cfg.number("frac.beta");
  const auto psi = ctx.cfg.psi();
  EigenOptions opt;
  opt.seed = ctx.cfg.seed();
  json reports = json::array();
  for (double r : exponents(ctx, "eigen.r")) {
    const FracParams params{alpha, beta, r};
    params.validate_for(r);
    const GradientOperator op(d, params, psi);
    const SeparablePreconditioner pre(op);
    const auto e = first_eigenpair(op, pre, r, opt);
    const auto bar = search_barrier(op, e, default_delta_candidates(d.length()));
    reports.push_back({{"r", r},
                       {"alpha", alpha},
                       {"beta", beta},
                       {"psi", psi.name()},
                       {"lambda1", e.lambda1},
                       {"m", bar.m},
                       {"delta", bar.delta},
                       {"sigma", bar.sigma},
                       {"barrier_ok", bar.ok},
                       {"iterations", e.iterations},
                       {"residual", e.residual}});
    export_field(ctx, "theta_r" + short_number(r) + ".csv", e.theta);
    ctx.out << "r=" << r << " lambda1=" << std::setprecision(10) << e.lambda1 << std::setprecision(6)
            << " m=" << bar.m << " delta=" << bar.delta << " sigma=" << bar.sigma << '\n';
  }
  write_report(ctx, "eigen.json", {{"n", d.nx() - 2}, {"reports", reports}});
  return ok;
}

int torsion(const Context& ctx) {
  const auto d = ctx.cfg.domain();
  const double alpha = ctx.cfg.number("frac.alpha"), beta = ctx.cfg.number("frac.beta");
  const auto psi = ctx.cfg.psi();
  json reports = json::array();
  for (double r : exponents(ctx, "torsion.r")) {
    const FracParams params{alpha, beta, r};
    params.validate_for(r);
    const GradientOperator op(d, params, psi);
    const SeparablePreconditioner pre(op);
    const auto s = solve_torsion(op, pre, r);
    reports.push_back({{"r", r}, {"l", s.l}, {"iterations", s.iterations}, {"final_gradient_norm", s.gradient_norm}});
    export_field(ctx, "e_r" + short_number(r) + ".csv", s.e);
    ctx.out << "r=" << r << " l=" << std::setprecision(10) << s.l << std::setprecision(6) << " iterations=" << s.iterations
            << '\n';
  }
  write_report(ctx, "torsion.json", {{"n", d.nx() - 2}, {"reports", reports}});
  return ok;
}

struct Setup {
  KirchhoffInstance inst;
  Domain d;
  Auxiliary aux;
};

Setup setup(const Context& ctx) {
  auto inst = ctx.cfg.instance();
  auto d = ctx.cfg.domain();
  auto aux = compute_auxiliary(inst, d, ctx.cfg.auxiliary_options());
  return {std::move(inst), std::move(d), std::move(aux)};
}

// c from construct.c, or from the doubling search when it is 0.
FindCResult choose_c(const Context& ctx, const KirchhoffInstance& inst, const Auxiliary& aux) {
  const double fixed = ctx.cfg.number("construct.c");
  if (fixed > 0.0) return {true, fixed, 0, 0.0, 0.0};
  return find_c(inst, aux, static_cast<int>(ctx.cfg.integer("search.c_doublings")));
}

int construct(const Context& ctx) {
  const auto [inst, d, aux] = setup(ctx);
  const auto fc = choose_c(ctx, inst, aux);
  json body{{"find_c", to_json(fc)}};
  if (!fc.found) {
    ctx.err << "no admissible c within the doubling budget: ratio1=" << fc.ratio1 << " ratio2=" << fc.ratio2 << '\n';
    write_report(ctx, "construct.json", body);
    return verdict_failed;
  }
  const auto pair = construct_pair(inst, aux, fc.c, ctx.cfg.sub_mode());
  body["pair"] = pair_constants(pair);
  body["sub_mode"] = sub_mode_name(ctx.cfg.sub_mode());
  export_field(ctx, "phi1.csv", pair.phi1);
  export_field(ctx, "phi2.csv", pair.phi2);
  export_field(ctx, "psi1.csv", pair.psi1);
  export_field(ctx, "psi2.csv", pair.psi2);
  ctx.out << "zeta=" << pair.zeta << " c=" << pair.c << " sup phi1=" << pair.phi1.max() << " sup psi1=" << pair.psi1.max()
          << '\n';
  write_report(ctx, "construct.json", body);
  return ok;
}

// Shared by verify and solve: hypotheses, pair and verdicts. Fills the certificate and
// returns the verified pair, or nothing when a verdict failed.
std::optional<SubSuperPair> certify(const Context& ctx, const Setup& s, json& cert) {
  const auto hyp = check_hypotheses(s.inst, s.d);
  cert["hypotheses"] = to_json(hyp);
  cert["sub_mode"] = sub_mode_name(ctx.cfg.sub_mode());
  cert["verdicts"] = json::array();
  cert["residual_norms"] = json::array();
  cert["iterations"] = 0;
  cert["zeta_star"] = nullptr;
  if (!hyp.ok) {
    list_failures(ctx, hyp);
    if (ctx.cfg.flag("hypotheses.enforce")) {
      cert["status"] = "hypotheses_failed";
      return std::nullopt;
    }
  }
  const auto& aux = s.aux;
  cert["m"] = aux.m;
  cert["delta"] = aux.delta;
  cert["sigma"] = aux.sigma;
  cert["lambda1p"] = aux.eig_p.lambda1;
  cert["lambda1q"] = aux.eig_q.lambda1;
  cert["lp"] = aux.tor_p.l;
  cert["lq"] = aux.tor_q.l;

  const double tol = ctx.cfg.number("solver.tol");
  std::optional<SubSuperPair> pair;
  VerifyReport rep;
  if (ctx.cfg.flag("search.enabled")) {
    ZetaSearchOptions opt;
    opt.zeta0 = ctx.cfg.number("search.zeta0");
    opt.max_doublings = static_cast<int>(ctx.cfg.integer("search.max_doublings"));
    opt.c_doublings = static_cast<int>(ctx.cfg.integer("search.c_doublings"));
    opt.tol = tol;
    opt.mode = ctx.cfg.sub_mode();
    auto res = find_zeta_star(s.inst, aux, opt);
    json hist = json::array();
    for (const auto& h : res.history)
      hist.push_back({{"zeta", h.zeta}, {"c", h.c}, {"sub_ok", h.sub_ok}, {"super_ok", h.super_ok},
                      {"order_ok", h.order_ok}});
    cert["search_history"] = hist;
    cert["iterations"] = res.history.size();
    if (!res.found) {
      cert["status"] = "no_certificate";
      ctx.err << "no certificate within " << opt.max_doublings << " doublings of zeta from " << opt.zeta0 << '\n';
      return std::nullopt;
    }
    pair = std::move(res.pair);
    rep = res.report;
  } else {
    const auto fc = choose_c(ctx, s.inst, aux);
    cert["find_c"] = to_json(fc);
    if (!fc.found) {
      cert["status"] = "no_admissible_c";
      ctx.err << "no admissible c within the doubling budget: ratio1=" << fc.ratio1 << " ratio2=" << fc.ratio2 << '\n';
      return std::nullopt;
    }
    pair = construct_pair(s.inst, aux, fc.c, ctx.cfg.sub_mode());
    rep = verify_pair(s.inst, aux, *pair, TestCone::interior(s.d), tol);
  }
  cert["zeta"] = pair->zeta;
  cert["c"] = pair->c;
  cert["pair"] = pair_constants(*pair);
  for (const auto& v : rep.verdicts) {
    cert["verdicts"].push_back(to_json(v));
    cert["residual_norms"].push_back(v.margin);
    ctx.out << (v.ok ? "pass " : "FAIL ") << v.name << " margin=" << v.margin << '\n';
  }
  if (!rep.ok) {
    cert["status"] = "verdict_failed";
    list_failures(ctx, rep);
    return std::nullopt;
  }
  cert["status"] = "verified";
  cert["zeta_star"] = pair->zeta;
  return pair;
}

int verify(const Context& ctx) {
  const auto s = setup(ctx);
  json cert;
  const auto pair = certify(ctx, s, cert);
  write_report(ctx, "certificate.json", cert);
  return pair ? ok : verdict_failed;
}

int solve(const Context& ctx) {
  const auto s = setup(ctx);
  json cert;
  const auto pair = certify(ctx, s, cert);
  if (!pair) {
    write_report(ctx, "solution.json", cert);
    return verdict_failed;
  }
  IterationOptions opt;
  opt.tol = ctx.cfg.number("solver.tol");
  opt.max_iter = static_cast<int>(ctx.cfg.integer("solver.max_iter"));
  opt.g_scale = ctx.cfg.number("solver.g_scale");
  opt.from_super = ctx.cfg.flag("solver.from_super");
  KirchhoffInstance at = s.inst;
  at.zeta = pair->zeta;
  const auto sol = monotone_iteration(at, s.aux, *pair, opt);
  const bool good = sol.converged && sol.residual_u <= 10.0 * opt.tol && sol.residual_v <= 10.0 * opt.tol;
  cert["verify_residual_norms"] = cert["residual_norms"];
  cert["residual_norms"] = json::array({sol.residual_u, sol.residual_v});
  cert["iterations"] = sol.iterations;
  cert["solution"] = {{"converged", sol.converged},
                      {"from_super", opt.from_super},
                      {"increments", sol.increments},
                      {"min_step_u", sol.min_step_u},
                      {"min_step_v", sol.min_step_v},
                      {"max_escape", sol.max_escape},
                      {"g_lambda_u", sol.g_lambda_u},
                      {"g_lambda_v", sol.g_lambda_v},
                      {"sup_u", sol.u.max()},
                      {"sup_v", sol.v.max()}};
  cert["status"] = good ? "solved" : "not_converged";
  export_field(ctx, "u.csv", sol.u);
  export_field(ctx, "v.csv", sol.v);
  ctx.out << "iterations=" << sol.iterations << " converged=" << sol.converged << " residuals=" << sol.residual_u
          << ", " << sol.residual_v << '\n';
  if (!good) ctx.err << "monotone iteration did not reach the residual target\n";
  write_report(ctx, "solution.json", cert);
  return good ? ok : verdict_failed;
}

int reduce(const Context& ctx) {
  ReductionOptions opt;
  opt.T = ctx.cfg.number("domain.T");
  opt.alpha = ctx.cfg.number("reduce.alpha");
  opt.beta = ctx.cfg.number("frac.beta");
  opt.n2d = static_cast<std::size_t>(ctx.cfg.integer("grid.n"));
  opt.n1d = static_cast<std::size_t>(ctx.cfg.integer("reduce.n1d"));
  opt.napply = 4 * opt.n2d;
  const auto rows = classical_reduction(opt);
  std::ofstream csv(ctx.dir / "reduce.csv");
  if (!csv) throw Error("cannot write " + (ctx.dir / "reduce.csv").string());
  csv << "quantity,computed,exact,relative_error,tolerance,ok\n";
  json table = json::array();
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.ok;
    csv << r.quantity << ',' << format_double(r.computed) << ',' << format_double(r.exact) << ','
        << format_double(r.relative_error) << ',' << (r.tolerance ? format_double(*r.tolerance) : "") << ','
        << (r.ok ? "true" : "false") << '\n';
    table.push_back({{"quantity", r.quantity}, {"computed", r.computed}, {"exact", r.exact},
                     {"relative_error", r.relative_error},
                     {"tolerance", r.tolerance ? json(*r.tolerance) : json(nullptr)}, {"ok", r.ok}});
    ctx.out << (r.ok ? "ok   " : "FAIL ") << r.quantity << " rel=" << r.relative_error << '\n';
  }
  write_report(ctx, "reduce.json", {{"n2d", opt.n2d}, {"n1d", opt.n1d}, {"napply", opt.napply}, {"rows", table}});
  return all ? ok : verdict_failed;
}

int sweep(const Context& ctx) {
  const auto values = ctx.cfg.numbers("sweep.values");
  if (values.empty()) throw ConfigError("sweep.values: empty");
  const auto& param = ctx.cfg.str("sweep.param");
  const auto d = ctx.cfg.domain();
  const auto base = ctx.cfg.instance();
  const auto cone = TestCone::interior(d);
  const double tol = ctx.cfg.number("solver.tol");
  std::optional<Auxiliary> shared;
  if (param == "zeta") shared = compute_auxiliary(base, d, ctx.cfg.auxiliary_options());

  std::ofstream csv(ctx.dir / "sweep.csv");
  if (!csv) throw Error("cannot write " + (ctx.dir / "sweep.csv").string());
  csv << std::boolalpha << param << ",c,sub_ok,super_ok,order_ok,ok,sub1,sub2,super1,super2,order1,order2\n";
  json rows = json::array();
  for (double v : values) {
    auto inst = base;
    (param == "zeta" ? inst.zeta : inst.alpha) = v;
    try {
      inst.validate();
    } catch (const ParameterError& e) {
      throw ConfigError("sweep.values: " + std::string(e.what()));
    }
    const Auxiliary aux = shared ? *shared : compute_auxiliary(inst, d, ctx.cfg.auxiliary_options());
    const auto fc = choose_c(ctx, inst, aux);
    json row{{param, v}, {"find_c", to_json(fc)}};
    csv << format_double(v) << ',';
    if (!fc.found) {
      csv << ",false,false,false,false,,,,,,\n";
      row["ok"] = false;
      rows.push_back(row);
      continue;
    }
    const auto pair = construct_pair(inst, aux, fc.c, ctx.cfg.sub_mode());
    const auto rep = verify_pair(inst, aux, pair, cone, tol);
    csv << format_double(fc.c) << ',' << rep.sub_ok() << ',' << rep.super_ok() << ',' << rep.order_ok() << ','
        << rep.ok;
    row["ok"] = rep.ok;
    row["verdicts"] = json::array();
    for (const auto& vd : rep.verdicts) {
      csv << ',' << format_double(vd.margin);
      row["verdicts"].push_back(to_json(vd));
    }
    csv << '\n';
    rows.push_back(row);
    ctx.out << param << '=' << v << " ok=" << rep.ok << '\n';
  }
  write_report(ctx, "sweep.json", {{"param", param}, {"rows", rows}});
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional Kirchhoff system: operators, sub/supersolutions, monotone iteration", "hkirch"};
  std::string config_path, out_dir = "out";
  std::vector<std::string> overrides;
  std::optional<long> seed;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory (created if missing)")->capture_default_str();
  app.add_option("--override", overrides, "KEY=VALUE, applied after the config file (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--seed", seed, "seed of the eigenvalue start vector");
  app.fallthrough();
  app.require_subcommand(1, 1);
  const std::pair<const char*, const char*> commands[] = {
      {"ops-test", "operator identity suite"},
      {"eigen", "first eigenpair and barrier constants"},
      {"torsion", "torsion functions"},
      {"construct", "build and export the sub/supersolution pair"},
      {"verify", "weak-inequality certificate"},
      {"solve", "monotone iteration inside the verified bracket"},
      {"reduce", "classical-limit comparison table"},
      {"sweep", "verdicts over a list of zeta or alpha values"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return error;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    for (const auto& o : overrides) cfg.set_override(o);
    if (seed) cfg.set("seed", std::to_string(*seed));
    cfg.validate();

    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + out_dir);

    const std::string command = app.get_subcommands().front()->get_name();
    const Context ctx{command, std::move(cfg), dir, out, err};
    if (command == "ops-test") return ops_test(ctx);
    if (command == "eigen") return eigen(ctx);
    if (command == "torsion") return torsion(ctx);
    if (command == "construct") return construct(ctx);
    if (command == "verify") return verify(ctx);
    if (command == "solve") return solve(ctx);
    if (command == "reduce") return reduce(ctx);
    return sweep(ctx);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return error;
  }
}

}  // namespace hk::cli
