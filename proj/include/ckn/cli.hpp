#pragma once

// Command-line driver. Exit codes: 0 pass, 1 finding, 2 error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ckn/battery.hpp"
#include "ckn/error.hpp"
#include "ckn/functionals.hpp"
#include "ckn/hermite.hpp"
#include "ckn/modal.hpp"
#include "ckn/profile_dsl.hpp"
#include "ckn/profiles.hpp"
#include "ckn/report.hpp"
#include "ckn/stability.hpp"

namespace ckn {

enum ExitCode { kExitPass = 0, kExitFinding = 1, kExitError = 2 };

struct RunConfig {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  unsigned long long seed = 12345;

  int n = 3;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> gamma;
  double t = 2.0;
  std::vector<std::string> profiles;
  double tolerance = 1e-8;
  int kmax = 3;
  long budget = 1500;
  int sharp_kmax = 200;
  int dmax = 4;
  int imax = 8;
  int samples = 5;
};

namespace detail {

struct CommandSet {
  CLI::App* verify = nullptr;
  CLI::App* ckn_radial = nullptr;
  CLI::App* ckn_alpha = nullptr;
  CLI::App* hpw = nullptr;
  CLI::App* identities = nullptr;
  CLI::App* modal_identities = nullptr;
  CLI::App* sharp = nullptr;
  CLI::App* stability = nullptr;
  CLI::App* hermite = nullptr;
  CLI::App* gap = nullptr;
  CLI::App* products = nullptr;
  CLI::App* poincare = nullptr;
};

inline CommandSet build_app(CLI::App& app, RunConfig& c) {
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--config", c.config_path, "flat key=value file; flags override it");
  app.add_option("--out", c.out_path, "write the report here instead of stdout");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--abs-tol", c.abs_tol, "absolute quadrature tolerance");
  app.add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");
  app.add_option("--seed", c.seed, "random seed");

  auto dim = [&](CLI::App* s) { s->add_option("--n", c.n, "dimension"); };
  auto weights = [&](CLI::App* s, bool with_t) {
    s->add_option("--alpha", c.alpha);
    s->add_option("--beta", c.beta);
    s->add_option("--gamma", c.gamma, "defaults to the balanced value");
    if (with_t) s->add_option("--t", c.t);
  };
  auto prof = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--profile", c.profiles, "profile DSL string, repeatable");
    if (required) o->required();
  };
  auto tol = [&](CLI::App* s) { s->add_option("--tolerance", c.tolerance, "pass threshold"); };

  CommandSet cs;
  cs.verify = app.add_subcommand("verify", "deficit and identity checks");
  cs.verify->require_subcommand(1);
  cs.ckn_radial = cs.verify->add_subcommand("ckn-radial", "second-order CKN deficit ratio");
  dim(cs.ckn_radial), weights(cs.ckn_radial, true), prof(cs.ckn_radial, true), tol(cs.ckn_radial);
  cs.ckn_alpha = cs.verify->add_subcommand("ckn-alpha", "weighted Laplacian uncertainty ratio");
  dim(cs.ckn_alpha), prof(cs.ckn_alpha, true), tol(cs.ckn_alpha);
  cs.ckn_alpha->add_option("--alpha", c.alpha);
  cs.hpw = cs.verify->add_subcommand("hpw", "Heisenberg uncertainty ratio");
  dim(cs.hpw), prof(cs.hpw, true), tol(cs.hpw);
  cs.identities = cs.verify->add_subcommand("identities", "radial integral identities");
  dim(cs.identities), prof(cs.identities, false), tol(cs.identities);
  cs.identities->add_option("--alpha", c.alpha);
  cs.modal_identities = cs.verify->add_subcommand("modal-identities", "per-mode identities");
  dim(cs.modal_identities), weights(cs.modal_identities, false), prof(cs.modal_identities, false), tol(cs.modal_identities);
  cs.modal_identities->add_option("--kmax", c.kmax);

  cs.sharp = app.add_subcommand("sharp-constant", "bracket the t = 2 sharp constant over modes");
  dim(cs.sharp), weights(cs.sharp, false);
  cs.sharp->add_option("--budget", c.budget, "evaluations per mode");
  cs.sharp->add_option("--kmax", c.sharp_kmax, "largest mode scanned");

  cs.stability = app.add_subcommand("stability", "stability estimates on a profile battery");
  dim(cs.stability), prof(cs.stability, false);

  cs.hermite = app.add_subcommand("hermite", "Hermite algebra checks");
  cs.hermite->require_subcommand(1);
  cs.gap = cs.hermite->add_subcommand("gap", "spectral gap of the truncated quadratic form");
  dim(cs.gap);
  cs.gap->add_option("--dmax", c.dmax);
  cs.products = cs.hermite->add_subcommand("check-products", "t^2 product integrals against Gauss quadrature");
  cs.products->add_option("--imax", c.imax);
  cs.poincare = cs.hermite->add_subcommand("poincare", "Poincare inequality on random expansions");
  dim(cs.poincare);
  cs.poincare->add_option("--dmax", c.dmax);
  cs.poincare->add_option("--samples", c.samples);
  return cs;
}

inline void parse_args(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app.parse(args);
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidParameter, "cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::ParseError,
            path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
    require(!key.empty(), ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": empty key");
    kv.emplace_back(key, val);
  }
  return kv;
}

inline std::string prescan_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return "";
}

inline void relax_required(CLI::App* app) {
  for (CLI::Option* o : app->get_options({})) o->required(false);
  for (CLI::App* sub : app->get_subcommands({})) relax_required(sub);
}

// Config keys the command line did not set are appended as flags.
inline std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& path) {
  const auto kv = read_config(path);
  RunConfig probe;
  CLI::App app;
  build_app(app, probe);
  relax_required(&app);
  parse_args(app, args);
  std::vector<CLI::App*> chain{&app};
  while (!chain.back()->get_subcommands().empty()) chain.push_back(chain.back()->get_subcommands().front());
  std::vector<std::string> out = args;
  for (const auto& [key, val] : kv) {
    if (key == "config") continue;
    const CLI::Option* opt = nullptr;
    for (auto it = chain.rbegin(); it != chain.rend() && !opt; ++it) opt = (*it)->get_option_no_throw("--" + key);
    require(opt != nullptr, ErrorKind::ParseError, "config key '" + key + "' is not an option of this command");
    if (opt->count() == 0) out.push_back("--" + key + "=" + val);
  }
  return out;
}

inline QuadratureSpec with_overrides(QuadratureSpec s, const RunConfig& c) {
  if (c.abs_tol) s.abs_tol = *c.abs_tol;
  if (c.rel_tol) s.rel_tol = *c.rel_tol;
  return s;
}

struct Outcome {
  Report report;
  int code = kExitPass;
  std::vector<std::string> messages;

  void finding() { code = std::max(code, static_cast<int>(kExitFinding)); }
  void error(std::string msg) {
    code = kExitError;
    messages.push_back(std::move(msg));
  }
};

inline InequalityParams params_from(const RunConfig& c) {
  InequalityParams p{c.n, c.alpha, c.beta, 0.0, c.t};
  p.gamma = c.gamma ? *c.gamma : InequalityParams::balanced_gamma(c.alpha, c.beta, c.t);
  return p;
}

inline void require_valid(const InequalityParams& p) {
  const ValidityReport v = validate_params(p);
  require(v.basic_ok(), ErrorKind::InvalidParameter, "invalid parameters; violated: " + v.failed_basic());
}

// Deficit ratio rows: one per profile.
inline Outcome run_ratio(const RunConfig& c, const std::string& check,
                         const std::function<DeficitReport(const RadialProfile&)>& fn) {
  Outcome o;
  o.report.command = "verify " + check;
  o.report.table.columns = {"profile", "check", "lhs", "rhs", "constant", "ratio", "tolerance", "pass", "converged", "message"};
  for (const auto& s : c.profiles) {
    const RadialProfile u = make_family(s);
    try {
      const DeficitReport r = fn(u);
      const bool pass = r.ratio >= 1.0 - c.tolerance;
      if (!pass) o.finding();
      o.report.table.add({s, check, r.lhs, r.rhs, r.constant, r.ratio, c.tolerance, pass, true, std::string()});
    } catch (const Error& e) {
      if (!e.is_quadrature_failure() && e.kind() != ErrorKind::DecayViolation) throw;
      o.error(s + ": " + e.what());
      o.report.table.add({s, check, NAN, NAN, NAN, NAN, c.tolerance, false, false, std::string(e.what())});
    }
  }
  return o;
}

inline std::vector<std::string> profiles_or(const RunConfig& c, std::vector<std::string> fallback) {
  return c.profiles.empty() ? fallback : c.profiles;
}

inline Outcome run_identities(const RunConfig& c, const QuadratureSpec& spec) {
  Outcome o;
  o.report.command = "verify identities";
  o.report.table.columns = {"profile", "check", "lhs", "rhs", "residual", "relative", "tolerance", "informational", "pass", "converged", "message"};
  using Fn = std::function<IdentityResidual(const RadialProfile&)>;
  const std::vector<std::pair<Fn, bool>> checks = {
      {[&](const RadialProfile& u) { return identity_eq1_residual(c.n, c.alpha, u, spec); }, false},
      {[&](const RadialProfile& u) { return identity_general_residual(c.n, c.alpha, u, spec); }, false},
      {[&](const RadialProfile& u) { return identity_hessian1_residual(c.n, u, spec); }, false},
      {[&](const RadialProfile& u) { return identity_crucial_residual(c.n, u, spec); }, false},
      {[&](const RadialProfile& u) { return identity_crucial_literal_residual(c.n, u, spec); }, true},
      {[&](const RadialProfile& u) { return identity_radial_delta_residual(c.n, c.alpha, u, spec); }, false},
  };
  const char* names[] = {"eq1", "general", "hessian1", "crucial", "crucial-literal", "radial-delta"};
  for (const auto& s : profiles_or(c, identity_battery())) {
    const RadialProfile u = make_family(s);
    for (std::size_t k = 0; k < checks.size(); ++k) {
      const bool info = checks[k].second;
      try {
        const IdentityResidual r = checks[k].first(u);
        const double rel = r.relative();
        const bool pass = info || rel <= c.tolerance;
        if (!pass) o.finding();
        o.report.table.add({s, std::string(names[k]), r.lhs, r.rhs, r.residual, rel, c.tolerance, info, pass, true, std::string()});
      } catch (const Error& e) {
        if (!e.is_quadrature_failure() && e.kind() != ErrorKind::DecayViolation) throw;
        o.error(s + " " + names[k] + ": " + e.what());
        o.report.table.add({s, std::string(names[k]), NAN, NAN, NAN, NAN, c.tolerance, info, false, false, std::string(e.what())});
      }
    }
  }
  return o;
}

inline Outcome run_modal_identities(const RunConfig& c, const QuadratureSpec& spec) {
  Outcome o;
  const double gamma = c.gamma ? *c.gamma : InequalityParams::balanced_gamma(c.alpha, c.beta, 2.0);
  o.report.command = "verify modal-identities";
  o.report.table.columns = {"profile", "k", "check", "lhs", "rhs", "relative", "tolerance", "pass", "converged", "message"};
  for (const auto& s : profiles_or(c, identity_battery())) {
    const ModalProfile g = ModalProfile::from_radial(make_family(s));
    for (int k = 0; k <= c.kmax; ++k) {
      try {
        const ModeIdentityReport r = mode_identity_residual(g, c.n, c.alpha, c.beta, gamma, k, spec);
        const std::pair<std::string, IdentityResidual> parts[] = {{"A", r.a}, {"B", r.b}, {"C", r.c}};
        for (const auto& [nm, ir] : parts) {
          const bool pass = ir.relative() <= c.tolerance;
          if (!pass) o.finding();
          o.report.table.add({s, static_cast<long long>(k), nm, ir.lhs, ir.rhs, ir.relative(), c.tolerance, pass, true, std::string()});
        }
      } catch (const Error& e) {
        if (!e.is_quadrature_failure() && e.kind() != ErrorKind::DecayViolation) throw;
        o.error(s + " k=" + std::to_string(k) + ": " + e.what());
        o.report.table.add({s, static_cast<long long>(k), std::string("ABC"), NAN, NAN, NAN, c.tolerance, false, false, std::string(e.what())});
      }
    }
  }
  return o;
}

inline Outcome run_sharp(const RunConfig& c) {
  Outcome o;
  const double gamma = c.gamma ? *c.gamma : InequalityParams::balanced_gamma(c.alpha, c.beta, 2.0);
  require_valid({c.n, c.alpha, c.beta, gamma, 2.0});
  const SharpConstantBracket br = min_over_k(c.n, c.alpha, c.beta, gamma, c.budget, c.sharp_kmax);
  o.report.command = "sharp-constant";
  o.report.table.columns = {"row", "k", "lower", "lower_printed", "upper", "family", "truncation_k", "tail_bound", "budget_exhausted"};
  for (const auto& m : br.per_k) {
    if (m.lower > m.upper + 1e-9 * std::max(1.0, std::abs(m.upper))) o.finding();
    o.report.table.add({std::string("mode"), static_cast<long long>(m.k), m.lower, m.lower_printed, m.upper, m.family,
                        static_cast<long long>(br.truncation_k), br.tail_bound, br.budget_exhausted});
  }
  o.report.table.add({std::string("summary"), static_cast<long long>(br.k_star), br.lower, NAN, br.upper, std::string(),
                      static_cast<long long>(br.truncation_k), br.tail_bound, br.budget_exhausted});
  return o;
}

inline Outcome run_stability(const RunConfig& c, const QuadratureSpec& spec) {
  Outcome o;
  o.report.command = "stability";
  o.report.table.columns = {"profile", "n", "delta", "delta_literal", "relative_distance_grad", "relative_distance_l2",
                            "coefficient_grad", "coefficient_l2", "margin_grad", "margin_l2", "satisfied_grad",
                            "satisfied_l2", "hpw_step_holds", "converged", "message"};
  for (const auto& s : profiles_or(c, stability_battery())) {
    const RadialProfile u = make_family(s);
    try {
      const StabilityReport g = stability_report_gradient(u, c.n, spec);
      const StabilityReport l = stability_report_l2(u, c.n, spec);
      if (!g.satisfied || !l.satisfied) o.finding();
      o.report.table.add({s, static_cast<long long>(c.n), g.delta, g.delta_literal, g.relative_distance, l.relative_distance,
                          g.theorem_coefficient, l.theorem_coefficient, g.delta - g.theorem_coefficient * g.relative_distance,
                          l.delta - l.theorem_coefficient * l.relative_distance, g.satisfied, l.satisfied, l.hpw_step_holds,
                          true, std::string()});
    } catch (const Error& e) {
      if (!e.is_quadrature_failure() && e.kind() != ErrorKind::DecayViolation) throw;
      o.error(s + ": " + e.what());
      o.report.table.add({s, static_cast<long long>(c.n), NAN, NAN, NAN, NAN, NAN, NAN, NAN, NAN, false, false, false, false,
                          std::string(e.what())});
    }
  }
  return o;
}

inline Outcome run_gap(const RunConfig& c) {
  require(c.n >= 1 && c.n <= 4, ErrorKind::InvalidParameter, "hermite gap needs 1 <= n <= 4");
  require(c.dmax >= 0, ErrorKind::InvalidParameter, "dmax must be >= 0");
  Outcome o;
  o.report.command = "hermite gap";
  o.report.table.columns = {"n", "D", "gap", "claimed", "meets_claim"};
  const SpectralGapReport r = spectral_gap(c.n, c.dmax);
  for (int d = 0; d <= c.dmax; ++d) {
    const double g = r.sequence[static_cast<std::size_t>(d)];
    o.report.table.add({static_cast<long long>(c.n), static_cast<long long>(d), g, r.claimed, g >= r.claimed - 1e-9});
  }
  return o;
}

inline Outcome run_products(const RunConfig& c) {
  require(c.imax >= 0 && c.imax <= 60, ErrorKind::InvalidParameter, "imax must be in [0, 60]");
  Outcome o;
  o.report.command = "hermite check-products";
  o.report.table.columns = {"i", "j", "convention", "closed_form", "quadrature", "abs_diff", "tolerance", "pass"};
  const GaussRule rule = gauss_hermite_rule(c.imax + 4);
  for (const auto conv : {HermiteConvention::ProbabilistUnnormalized, HermiteConvention::ProbabilistNormalized}) {
    const std::string cname = conv == HermiteConvention::ProbabilistNormalized ? "normalized" : "unnormalized";
    for (int i = 0; i <= c.imax; ++i) {
      for (int j = 0; j <= c.imax; ++j) {
        double q = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double x = rule.nodes[k];
          q += rule.weights[k] * x * x * hermite_eval(i, x, conv) * hermite_eval(j, x, conv);
        }
        const double exact = x2_product_integral(i, j, conv);
        const double tol = 1e-10 * std::max(1.0, std::abs(exact));
        const bool pass = std::abs(q - exact) <= tol;
        if (!pass) o.finding();
        o.report.table.add({static_cast<long long>(i), static_cast<long long>(j), cname, exact, q, std::abs(q - exact), tol, pass});
      }
    }
  }
  return o;
}

inline Outcome run_poincare(const RunConfig& c) {
  require(c.n >= 1 && c.n <= 4, ErrorKind::InvalidParameter, "hermite poincare needs 1 <= n <= 4");
  require(c.dmax >= 0 && c.samples >= 1, ErrorKind::InvalidParameter, "need dmax >= 0 and samples >= 1");
  Outcome o;
  o.report.command = "hermite poincare";
  o.report.table.columns = {"sample", "n", "D", "lhs", "rhs", "q_form", "pass"};
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const auto basis = multi_indices(c.n, c.dmax);
  for (int s = 0; s < c.samples; ++s) {
    HermiteExpansion w;
    w.n = c.n;
    w.degree_cutoff = c.dmax;
    for (const auto& I : basis) w.set(I, coef(rng));
    const PoincarePair p = poincare_residual(w);
    const bool pass = p.lhs >= p.rhs - 1e-12 * std::max(1.0, p.lhs);
    if (!pass) o.finding();
    o.report.table.add({static_cast<long long>(s), static_cast<long long>(c.n), static_cast<long long>(c.dmax), p.lhs, p.rhs,
                        q_form(w), pass});
  }
  return o;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Numerical checks for second-order CKN inequalities", "ckn"};
  detail::CommandSet cs;
  try {
    const std::string path = detail::prescan_config(args);
    if (!path.empty()) args = detail::merge_config(args, path);
    cs = detail::build_app(app, cfg);
    detail::parse_args(app, args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  detail::Outcome res;
  try {
    if (cs.ckn_radial->parsed()) {
      const InequalityParams p = detail::params_from(cfg);
      detail::require_valid(p);
      const QuadratureSpec spec = detail::with_overrides(functional_spec(), cfg);
      res = detail::run_ratio(cfg, "ckn-radial", [&](const RadialProfile& u) { return ckn_radial_report(p, u, spec); });
    } else if (cs.ckn_alpha->parsed()) {
      const QuadratureSpec spec = detail::with_overrides(functional_spec(), cfg);
      res = detail::run_ratio(cfg, "ckn-alpha", [&](const RadialProfile& u) { return cknalpha_report(cfg.n, cfg.alpha, u, spec); });
    } else if (cs.hpw->parsed()) {
      const QuadratureSpec spec = detail::with_overrides(functional_spec(), cfg);
      res = detail::run_ratio(cfg, "hpw", [&](const RadialProfile& u) { return hpw_report(cfg.n, u, spec); });
    } else if (cs.identities->parsed()) {
      res = detail::run_identities(cfg, detail::with_overrides(functional_spec(), cfg));
    } else if (cs.modal_identities->parsed()) {
      res = detail::run_modal_identities(cfg, detail::with_overrides(modal_spec(), cfg));
    } else if (cs.sharp->parsed()) {
      res = detail::run_sharp(cfg);
    } else if (cs.stability->parsed()) {
      res = detail::run_stability(cfg, detail::with_overrides(stability_spec(), cfg));
    } else if (cs.gap->parsed()) {
      res = detail::run_gap(cfg);
    } else if (cs.products->parsed()) {
      res = detail::run_products(cfg);
    } else if (cs.poincare->parsed()) {
      res = detail::run_poincare(cfg);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  for (const auto& m : res.messages) err << "error: " << m << '\n';
  if (cfg.out_path.empty()) {
    res.report.write(out, cfg.format);
  } else {
    std::ofstream f(cfg.out_path);
    if (!f) {
      err << "error: cannot write " << cfg.out_path << '\n';
      return kExitError;
    }
    res.report.write(f, cfg.format);
  }
  return res.code;
}

}  // namespace ckn
