#include "rsmooth/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#ifdef RSMOOTH_HAVE_OPENMP
#include <omp.h>
#endif

#include "rsmooth/certify.hpp"
#include "rsmooth/manifest.hpp"
#include "rsmooth/walk.hpp"

namespace rsmooth {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> manifest_header(const RunManifest& m) {
  std::vector<std::string> lines;
  lines.push_back("manifest-begin");
  std::stringstream ss(serialize_manifest(m));
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  lines.push_back("manifest-end");
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "timestamp = %Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  lines.emplace_back(buf);
  return lines;
}

void write_output(const RunManifest& m, const std::string& body, std::ostream& fallback) {
  std::string path = m.get("out");
  std::ostringstream os;
  for (const auto& line : manifest_header(m)) os << "# " << line << "\n";
  os << body;
  if (path.empty()) {
    fallback << os.str();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << os.str();
}

long scan_t_eps(const TrajectoryLog& log, double eps) {
  for (const auto& s : log.steps)
    if (s.grad_norm < eps) return s.t;
  return -2;  // NOT_REACHED footer
}

int run_simulate(const RunManifest& m, std::ostream& out) {
  ProblemInstance inst = instance_from_manifest(m);
  OptimizerConfig cfg = optimizer_from_manifest(m);
  long steps = m.get_long("steps", 100);
  std::uint64_t seed = static_cast<std::uint64_t>(m.get_long("seed", 0));
  std::string format = m.get("format", "csv");
  bool full = format == "json";
  TrajectoryLog log = run_trajectory(inst, cfg, steps, seed, full);
  long t_eps = scan_t_eps(log, inst.params.epsilon);

  std::ostringstream body;
  if (format == "csv") {
    write_trajectory_csv(body, log, {}, t_eps);
  } else if (format == "json") {
    write_trajectory_jsonl(body, log, {});
    body << "# t_eps = " << (t_eps >= 0 ? std::to_string(t_eps) : std::string("NOT_REACHED"))
         << "\n";
  } else {
    throw std::invalid_argument("format must be csv or json");
  }
  write_output(m, body.str(), out);
  return 0;
}

int run_sweep(const RunManifest& m, std::ostream& out) {
  std::string axis = m.get("sweep_param", "eps");
  if (axis != "eps")
    throw std::invalid_argument("sweep: only sweep_param = eps is supported");
  std::vector<double> values = m.get_list("sweep_values");
  if (values.size() < 2) throw std::invalid_argument("sweep: need sweep_values (comma list)");
  long nseeds = m.get_long("seeds", 1);
  std::uint64_t base = static_cast<std::uint64_t>(m.get_long("seed", 0));
  std::vector<std::uint64_t> seeds;
  for (long i = 0; i < nseeds; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));

  std::string family = m.get("instance", "hinge");
  ProblemParams base_params = params_from_manifest(m);
  std::string tie = m.get("eta_tie", "fixed");
  double tie_factor = m.get_num("eta_tie_factor", 1.0);
  double eta = m.get_num("eta", 0.1);
  double gamma = m.get_num("gamma", 1.0);
  std::string opt = m.get("optimizer", "dadagrad");
  long T_cap = m.get_long("T_cap", 1000000);

  auto make_instance = [&](double eps) {
    ProblemParams p = base_params;
    p.epsilon = eps;
    if (family == "hinge") return hinge_objective(p);
    if (family == "coordwise") return coordwise_exp_objective(p, m.get_long("T", 64));
    throw std::invalid_argument("sweep: instance must be hinge or coordwise");
  };
  auto make_config = [&](double eps) {
    OptimizerConfig cfg;
    cfg.kind = optimizer_from_name(opt);
    cfg.gamma = gamma;
    if (tie == "fixed") {
      cfg.eta = eta;
    } else if (tie == "b2") {
      double sref = base_params.sigma > 0 ? base_params.sigma : 1.0;
      cfg.eta = tie_factor * std::sqrt(2.0) * gamma / (base_params.L1 * sref) *
                std::log1p(base_params.L1 * eps / base_params.L0);
    } else {
      throw std::invalid_argument("sweep: eta_tie must be fixed or b2");
    }
    return cfg;
  };
  auto eps_of = [](double eps) { return eps; };

  SweepResult result =
      ::rsmooth::run_sweep(axis, make_instance, make_config, eps_of, values, seeds, T_cap);

  std::ostringstream body;
  for (const auto& row : result.rows) {
    body << "# row " << axis << "=" << fmt(row.param) << " seed=" << row.seed << " t_eps=";
    if (row.t_eps == kNotReached)
      body << "NOT_REACHED";
    else
      body << row.t_eps;
    if (std::isfinite(row.lower_bound)) body << " lower_bound=" << fmt(row.lower_bound);
    body << "\n";
  }
  emit_plot_data(body, result, axis, "t_eps", {});
  write_output(m, body.str(), out);
  return 0;
}

int run_certify(const RunManifest& m, std::ostream& out, std::ostream& err) {
  ProblemInstance inst = instance_from_manifest(m);
  long n = m.get_long("samples", 10000);
  std::uint64_t seed = static_cast<std::uint64_t>(m.get_long("seed", 0));
  CertificateReport rep = certify_membership(inst, n, RandomStream{seed, 0});

  if (m.has("profile_out")) {
    // two-column objective profile over the sampling window (1-d instances)
    if (inst.dim != 1)
      throw std::invalid_argument("profile_out requires a one-dimensional instance");
    std::ofstream pf(m.get("profile_out"), std::ios::binary);
    if (!pf) throw std::runtime_error("cannot open " + m.get("profile_out"));
    pf << "# x f df\n";
    const int n_pts = 513;
    for (int i = 0; i < n_pts; ++i) {
      double x = inst.sample_lo[0] +
                 (inst.sample_hi[0] - inst.sample_lo[0]) * i / double(n_pts - 1);
      pf << fmt(x) << " " << fmt(inst.value({x})) << " " << fmt(inst.grad_at({x})[0]) << "\n";
    }
  }

  std::ostringstream body;
  body << "instance = " << inst.family << "\n";
  body << "dim = " << inst.dim << "\n";
  body << "samples = " << rep.n_samples << "\n";
  body << "smoothness_ratio_max = " << fmt(rep.smooth_ratio_max) << " ["
       << (rep.smooth_ok ? "PASS" : "FAIL") << "]\n";
  body << "fd_gradient_max_rel_err = " << fmt(rep.fd_max_rel_err) << " ["
       << (rep.fd_ok ? "PASS" : "FAIL") << "]\n";
  body << "gap = " << fmt(rep.gap_value) << " allowed " << fmt(rep.gap_allowed) << " ["
       << (rep.gap_ok ? "PASS" : "FAIL") << "]\n";
  body << "noise_max_excess = " << fmt(rep.noise_max_excess) << " ["
       << (rep.noise_ok ? "PASS" : "FAIL") << "]\n";
  body << "certificate = " << (rep.passed ? "PASS" : "FAIL") << "\n";
  if (!rep.passed) body << "witness = " << rep.witness << "\n";
  write_output(m, body.str(), out);
  if (!rep.passed) {
    err << "certificate failed: " << rep.witness << "\n";
    return 2;
  }
  return 0;
}

int run_walk(const RunManifest& m, std::ostream& out) {
  double p = m.get_num("p", 2.0 / 3.0);
  std::uint64_t seed = static_cast<std::uint64_t>(m.get_long("seed", 0));
  std::ostringstream body;

  WalkConfig wc;
  wc.horizon = m.get_long("horizon", wc.horizon);
  wc.barrier = m.get_num("barrier", wc.barrier);
  wc.n_mc = m.get_long("n_mc", wc.n_mc);

  if (m.has("lambda")) {
    double lambda = m.get_num("lambda", 0.0);
    WalkEstimate est =
        walk_hit_probability(p, lambda, wc.horizon, wc.barrier, wc.n_mc, seed);
    body << "z_hat = " << fmt(est.z_hat) << "\n";
    body << "ci95_halfwidth = " << fmt(est.ci_halfwidth) << "\n";
    body << "truncation_bias_bound = " << fmt(est.bias_bound) << "\n";
    if (lambda > (1.0 - p) / p)
      body << "martingale_root = " << fmt(h_lambda_root(p, lambda, 1e-12)) << "\n";
  }
  if (m.has("delta") || !m.has("lambda")) {
    // in this command `delta` is the survival probability target
    double delta = m.get_num("delta", 0.0);
    double tol = m.get_num("tol", 0.01 * (1.0 - p) / p);
    std::string method = m.get("method", "analytic");
    if (method != "analytic" && method != "mc" && method != "both")
      throw std::invalid_argument("walk: method must be analytic, mc or both");
    LambdaResult ana = lambda0(p, delta, Lambda0Method::analytic_upper, tol, seed, wc);
    body << "lambda0 = " << fmt(ana.value) << "\n";
    double zeta = zeta_from_lambda0(p, ana.value);
    body << "zeta = " << fmt(zeta) << "\n";
    if (method == "mc" || method == "both") {
      LambdaResult mc = lambda0(p, delta, Lambda0Method::mc_bisect, tol, seed, wc);
      body << "lambda0_mc_interval = [" << fmt(mc.lo) << ", " << fmt(mc.hi) << "]\n";
    }
    if (m.has("sigma2")) {
      double s2 = m.get_num("sigma2", 3.0);
      GammaConstants gc = gamma_constants(s2, delta, zeta);
      const char* names = gc.regime == 3 ? "gamma1 gamma2 gamma3" : "gamma4 gamma5 gamma6";
      body << "regime_p = " << fmt(gc.p) << "\n";
      body << names << " = " << fmt(gc.first) << " " << fmt(gc.second) << " " << fmt(gc.third)
           << "\n";
    }
  }
  write_output(m, body.str(), out);
  return 0;
}

int run_tricky(const RunManifest& m, std::ostream& out) {
  ProblemParams params = params_from_manifest(m);
  StepSizeFn alpha = stepsize_from_manifest(m);
  double p = m.get_num("p", 2.0 / 3.0);
  // survival_delta is the walk threshold; defaults to the exact balance point
  double delta = m.get_num("survival_delta", 0.0);
  double c1 = m.get_num("c1", -1.0);
  double c2 = m.get_num("c2", 4.0);
  TrickyPairReport rep = check_tricky_pair(alpha, Vec{c1}, Vec{c2}, p, delta, params);

  std::ostringstream body;
  auto line = [&](const char* name, bool ok) {
    body << name << " = " << (ok ? "PASS" : "FAIL") << "\n";
  };
  body << "c1 = " << fmt(rep.c1) << "\nc2 = " << fmt(rep.c2) << "\n";
  body << "G = " << fmt(rep.G) << "\n";
  line("collinear", rep.collinear);
  line("sign_opposed", rep.sign_opposed);
  line("magnitudes_above_eps", rep.magnitudes_above_eps);
  line("c1_within_cap", rep.c1_within_cap);
  line("c2_above_branch_min", rep.c2_above_branch_min);
  line("c2_below_cap", rep.c2_below_cap);
  body << "lambda_ratio = " << fmt(rep.lambda_ratio) << "\n";
  body << "lambda0_ref = " << fmt(rep.lambda0_ref) << "\n";
  line("ratio_at_least_lambda0", rep.ratio_at_least_lambda0);
  body << "tricky = " << (rep.tricky() ? "YES" : "NO") << "\n";
  write_output(m, body.str(), out);
  return 0;
}

int run_schedule(const RunManifest& m, std::ostream& out) {
  ProblemParams p = params_from_manifest(m);
  double eta = m.get_num("eta", 1.0);
  double gamma = m.get_num("gamma", 0.5 * chain_gamma_max(p, eta));
  long t_max = m.get_long("T", 64);
  ChainSchedule s = chain_schedule(p, eta, gamma, t_max, m.get_num("growth_c", 576.0));

  std::ostringstream body;
  body << "# log-domain schedule: t log_g log_m log_ell log_d (natural logs; d_0 = -inf)\n";
  for (long t = 0; t <= t_max; ++t) {
    std::size_t i = static_cast<std::size_t>(t);
    body << t << " " << fmt(s.g[i].logmag) << " " << fmt(s.m[i].logmag) << " "
         << fmt(s.ell[i].logmag) << " "
         << (s.d[i].is_zero() ? std::string("-inf") : fmt(s.d[i].logmag)) << "\n";
  }
  body << "# prefix = " << s.prefix << "\n";
  write_output(m, body.str(), out);
  return 0;
}

void add_keys(CLI::App* cmd, std::shared_ptr<std::vector<std::pair<std::string, std::string>>> kv,
              const std::vector<std::string>& keys) {
  for (const auto& key : keys) {
    cmd->add_option_function<std::string>(
        "--" + key, [kv, key](const std::string& v) { kv->emplace_back(key, v); });
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"adaptive-step-size lower-bound laboratory"};
  app.require_subcommand(1);

  auto kv = std::make_shared<std::vector<std::pair<std::string, std::string>>>();
  std::string manifest_path;

  const std::vector<std::string> inst_keys = {"instance", "delta",  "L0",     "L1",
                                              "sigma",    "sigma1", "sigma2", "eps",
                                              "dim",      "T",      "growth_c", "g_norm",
                                              "c1",       "c2",     "beta_g2"};
  const std::vector<std::string> opt_keys = {"optimizer",        "eta",
                                             "gamma",            "alpha_rule",
                                             "alpha_eta",        "alpha_c",
                                             "alpha_table_norms", "alpha_table_values"};
  const std::vector<std::string> io_keys = {"seed", "out", "format", "workers"};

  auto* simulate = app.add_subcommand("simulate", "run one trajectory and dump its log");
  add_keys(simulate, kv, inst_keys);
  add_keys(simulate, kv, opt_keys);
  add_keys(simulate, kv, io_keys);
  add_keys(simulate, kv, {"steps"});

  auto* sweep = app.add_subcommand("sweep", "hitting times over a parameter grid + fitted exponent");
  add_keys(sweep, kv, inst_keys);
  add_keys(sweep, kv, opt_keys);
  add_keys(sweep, kv, io_keys);
  add_keys(sweep, kv, {"sweep_param", "sweep_values", "seeds", "T_cap", "eta_tie",
                       "eta_tie_factor"});

  auto* certify = app.add_subcommand("certify", "membership certificates for an instance");
  add_keys(certify, kv, inst_keys);
  add_keys(certify, kv, opt_keys);
  add_keys(certify, kv, io_keys);
  add_keys(certify, kv, {"samples", "profile_out"});

  auto* walk = app.add_subcommand("walk", "hit probabilities, lambda0 and gamma constants");
  add_keys(walk, kv, {"p", "lambda", "delta", "sigma2", "n_mc", "horizon", "barrier", "method",
                      "tol"});
  add_keys(walk, kv, io_keys);

  auto* tricky = app.add_subcommand("tricky", "tricky-pair report for a step-size rule");
  add_keys(tricky, kv, inst_keys);
  add_keys(tricky, kv, opt_keys);
  add_keys(tricky, kv, io_keys);
  add_keys(tricky, kv, {"p", "survival_delta"});

  auto* schedule = app.add_subcommand("schedule", "log-domain dump of the divergence schedule");
  add_keys(schedule, kv, inst_keys);
  add_keys(schedule, kv, opt_keys);
  add_keys(schedule, kv, io_keys);

  for (auto* cmd : {simulate, sweep, certify, walk, tricky, schedule})
    cmd->add_option("--manifest", manifest_path, "key = value run description file");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    RunManifest m;
    if (!manifest_path.empty()) m = load_manifest(manifest_path);
    for (const auto& [k, v] : *kv) m.set(k, v);
    std::string command = app.get_subcommands().front()->get_name();
    if (m.has("command") && m.get("command") != command)
      throw std::invalid_argument("manifest command '" + m.get("command") +
                                  "' does not match subcommand '" + command + "'");
    m.set("command", command);
    if (const char* env_seed = std::getenv("RSMOOTH_SEED")) m.set("seed", env_seed);
#ifdef RSMOOTH_HAVE_OPENMP
    if (m.has("workers")) omp_set_num_threads(static_cast<int>(m.get_long("workers", 0)));
#endif

    if (command == "simulate") return run_simulate(m, out);
    if (command == "sweep") return run_sweep(m, out);
    if (command == "certify") return run_certify(m, out, err);
    if (command == "walk") return run_walk(m, out);
    if (command == "tricky") return run_tricky(m, out);
    if (command == "schedule") return run_schedule(m, out);
    err << "error: unknown command\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::range_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rsmooth
