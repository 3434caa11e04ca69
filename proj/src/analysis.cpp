#include "rsmooth/analysis.hpp"

#include <cmath>
#include <sstream>

#include "rsmooth/walk.hpp"

namespace rsmooth {

ChainVerification verify_chain_divergence(const ProblemParams& params, double eta, double gamma,
                                          long t_max) {
  ChainVerification rep;
  rep.t_max = t_max;

  ChainSchedule schedule;
  try {
    schedule = chain_schedule(params, eta, gamma, t_max);
  } catch (const std::domain_error&) {
    throw;  // precondition rejection, not a feasibility failure
  } catch (const std::logic_error& e) {
    rep.what = e.what();
    return rep;  // feasibility assertion failed; first_fail_t is in the message
  }
  rep.feasibility_ok = true;
  rep.prefix = schedule.prefix;

  auto sched = std::make_shared<const ChainSchedule>(std::move(schedule));
  ProblemInstance inst = chain_objective(sched);
  const ChainSchedule& s = *sched;
  const double floor = params.Delta * params.L1;

  rep.induction_ok = true;
  rep.gradient_floor_ok = true;
  for (long t = 0; t <= s.prefix; ++t) {
    std::size_t i = static_cast<std::size_t>(t);
    // gradient at the knot: f'(d_t) = -g_t, with |f'| on the divergence floor
    double slope = inst.grad_at({s.d_d[i]})[0];
    double es = std::abs(slope + s.g_d[i]) / std::max(1.0, s.g_d[i]);
    rep.max_rel_err_slope = std::max(rep.max_rel_err_slope, es);
    if (es > 1e-9 || -slope < floor * (1.0 - 1e-9)) {
      rep.gradient_floor_ok = false;
      if (rep.first_fail_t < 0) rep.first_fail_t = t;
      break;
    }
    // one update from x = d_t lands on d_{t+1}
    double landing = s.d_d[i] + eta * s.g_d[i] / std::sqrt(s.gsq_d[i]);
    double ex = std::abs(landing - s.d_d[i + 1]) / std::max(1.0, s.d_d[i + 1]);
    rep.max_rel_err_landing = std::max(rep.max_rel_err_landing, ex);
    if (ex > 1e-9) {
      rep.induction_ok = false;
      if (rep.first_fail_t < 0) rep.first_fail_t = t;
      break;
    }
    ++rep.induction_steps;
  }

  // free-running double trajectory: faithful until roundoff is amplified
  // past the valley width
  {
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::decorrelated_adagrad_norm;
    cfg.eta = eta;
    cfg.gamma = gamma;
    bool faithful = true;
    auto observer = [&](const StepView& v) {
      std::size_t t = static_cast<std::size_t>(v.t);
      double ex = std::abs(v.x[0] - s.d_d[t]) / std::max(1.0, s.d_d[t]);
      if (ex > 1e-9) faithful = false;
      if (faithful) ++rep.free_run_faithful;
      return faithful && v.t < s.prefix;
    };
    trajectory_scan(inst, cfg, s.prefix + 1, 0, observer);
  }

  // log-domain gradient floor over the whole schedule: g_t >= g_0 = Delta L1
  for (long t = 0; t <= t_max && rep.gradient_floor_ok; ++t) {
    if (xs_compare(s.g[static_cast<std::size_t>(t)], s.g[0]) < 0) {
      rep.gradient_floor_ok = false;
      rep.first_fail_t = t;
    }
  }

  rep.ok = rep.feasibility_ok && rep.induction_ok && rep.gradient_floor_ok &&
           rep.first_fail_t < 0;
  if (!rep.ok && rep.what.empty()) {
    std::ostringstream os;
    os << "chain verification failed at t = " << rep.first_fail_t
       << " (max landing rel err = " << rep.max_rel_err_landing << ")";
    rep.what = os.str();
  }
  return rep;
}

HittingTimeResult measure_hitting_time(const ProblemInstance& inst, const OptimizerConfig& cfg,
                                       double eps, long T_cap, std::uint64_t seed) {
  if (T_cap < 1) throw std::domain_error("measure_hitting_time: T_cap >= 1 required");
  HittingTimeResult res;
  auto observer = [&](const StepView& v) {
    if (v.grad_norm < eps) {
      res.t_eps = v.t;
      return false;
    }
    return true;
  };
  trajectory_scan(inst, cfg, T_cap, seed, observer);

  if (inst.family == "hinge" && (cfg.kind == OptimizerKind::decorrelated_adagrad ||
                                 cfg.kind == OptimizerKind::decorrelated_adagrad_norm)) {
    double d = inst.params.Delta;
    res.lower_bound = d * d / (64.0 * cfg.eta * cfg.eta * eps * eps);
  }
  std::ostringstream os;
  os << "instance=" << inst.family << " optimizer=" << optimizer_name(cfg.kind)
     << " eta=" << cfg.eta << " gamma=" << cfg.gamma << " eps=" << eps << " T_cap=" << T_cap
     << " seed=" << seed;
  res.config = os.str();
  return res;
}

PowerFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& grid) {
  if (grid.size() < 4)
    throw std::invalid_argument("fit_scaling_exponent: need at least 4 grid points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(grid.size());
  for (const auto& [param, t] : grid) {
    if (!(param > 0.0))
      throw std::invalid_argument("fit_scaling_exponent: parameter values must be positive");
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument(
          "fit_scaling_exponent: hitting times must be finite and positive; raise T_cap for "
          "NOT_REACHED entries");
    double x = std::log(param), y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_scaling_exponent: degenerate grid");
  PowerFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (const auto& [param, t] : grid) {
    double pred = fit.intercept + fit.slope * std::log(param);
    double r = std::log(t) - pred;
    ss_res += r * r;
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

TrickyPairReport check_tricky_pair(const StepSizeFn& alpha, const Vec& g1, const Vec& g2,
                                   double p, double delta, const ProblemParams& params) {
  params.validate_base();
  const double s2 = params.sigma2;
  if (!(s2 > 1.0)) throw std::domain_error("tricky pair: sigma2 > 1 required");
  if (!(p > 0.5 && p < s2 / (s2 + 1.0)))
    throw std::domain_error("tricky pair: p in (1/2, sigma2/(sigma2+1)) required");
  if (!(delta >= 0.0 && delta < p))
    throw std::domain_error("tricky pair: delta in [0, p) required");
  const double n1 = norm(g1), n2 = norm(g2);
  if (!(n1 > 0.0 && n2 > 0.0))
    throw std::invalid_argument("tricky pair: gradients must be nonzero");

  TrickyPairReport rep;
  rep.G = tricky_gradient_cap(params);

  Vec ghat = g1;
  for (double& v : ghat) v /= n1;
  rep.c1 = n1;
  rep.c2 = dot(g2, ghat);
  Vec resid = g2;
  axpy(-rep.c2, ghat, resid);
  if (norm(resid) > 1e-9 * n2)
    throw std::invalid_argument(
        "tricky pair: gradients must be collinear (a common unit direction)");
  rep.collinear = true;

  rep.sign_opposed = rep.c2 < 0.0;
  const double a1 = n1, a2 = std::abs(rep.c2);
  const double eps = params.epsilon, s1 = params.sigma1;
  rep.magnitudes_above_eps = a1 >= eps && a2 >= eps;
  const double q = (1.0 - p) / p;
  rep.c1_within_cap = a1 <= q * s1 + (q * s2 - 1.0) * rep.G;
  const double branch_split = q * s1 + (q * s2 - 1.0) * eps;
  rep.first_branch = a1 <= branch_split;
  double c2_min = rep.first_branch
                      ? (p * a1 + eps) / (1.0 - p)
                      : ((s2 + 1.0) * p * a1 - s1) / ((s2 + 1.0) * (1.0 - p) - 1.0);
  rep.c2_above_branch_min = a2 >= c2_min;
  rep.c2_below_cap = a2 <= (p * a1 + rep.G) / (1.0 - p);

  double beta1 = alpha(g1) * a1;
  double beta2 = alpha(g2) * a2;
  rep.lambda_ratio = beta1 / beta2;
  rep.lambda0_ref =
      lambda0(p, delta, Lambda0Method::analytic_upper, 1e-9, 0).value;
  rep.ratio_at_least_lambda0 = rep.lambda_ratio >= rep.lambda0_ref;
  return rep;
}

EscalationResult escalation_sequences(const StepSizeFn& alpha, double p0, double p1,
                                      const ProblemParams& params, double eps, double delta) {
  params.validate_base();
  const double s1 = params.sigma1, s2 = params.sigma2, L1 = params.L1;
  if (!(s2 > 1.0))
    throw std::domain_error("escalation: sigma2 > 1 required (both regimes need it)");
  for (double p : {p0, p1})
    if (!(p > 0.5 && p < s2 / (s2 + 1.0)))
      throw std::domain_error("escalation: p0, p1 in (1/2, sigma2/(sigma2+1)) required");
  if (!(delta > 0.0 && delta < std::min(p0, p1)))
    throw std::domain_error("escalation: delta in (0, min(p0, p1)) required");
  const double G = tricky_gradient_cap(params);
  if (!(G >= s1)) throw std::domain_error("escalation: requires G >= sigma1");
  double cap = std::min(std::min(s1, G / 2.0),
                        std::min((G - s1) / (s2 - 1.0), std::sqrt(params.Delta * params.L0 / 2.0)));
  if (!(eps > 0.0 && eps <= cap))
    throw std::domain_error(
        "escalation: requires eps <= min{ sigma1, G/2, (G - sigma1)/(sigma2 - 1), "
        "sqrt(Delta L0 / 2) }");

  EscalationResult out;

  // escalation inside [eps, sigma1 + (sigma2-1) eps]
  const double q0 = (1.0 - p0) / p0;
  const double A0 = q0 * s1 + (q0 * s2 - 1.0) * eps;
  out.k0 = exp_seq_count(eps, p0 / (1.0 - p0), eps / (1.0 - p0), A0);
  {
    double v = eps;
    out.x_norms.push_back(v);
    while (true) {
      double nxt = (p0 * v + eps) / (1.0 - p0);
      if (nxt > A0) break;
      out.x_norms.push_back(nxt);
      v = nxt;
    }
    long iter_k0 = static_cast<long>(out.x_norms.size()) - 1;
    if (iter_k0 != out.k0)
      throw std::logic_error("escalation: k0 closed form disagrees with direct iteration");
  }

  // escalation inside [sigma1 + (sigma2-1) eps, sigma1 + (sigma2-1) G]
  const double q1 = (1.0 - p1) / p1;
  const double r1 = (s2 + 1.0) * p1 / ((s2 + 1.0) * (1.0 - p1) - 1.0);
  const double b1rec = -s1 / ((s2 + 1.0) * (1.0 - p1) - 1.0);
  const double y0 = s1 + (s2 - 1.0) * eps;
  const double A1 = q1 * s1 + (q1 * s2 - 1.0) * G;
  out.k1 = exp_seq_count(y0, r1, b1rec, A1);
  {
    double v = y0;
    out.y_norms.push_back(v);
    while (true) {
      double nxt = r1 * v + b1rec;
      if (nxt > A1) break;
      out.y_norms.push_back(nxt);
      v = nxt;
    }
    long iter_k1 = static_cast<long>(out.y_norms.size()) - 1;
    if (iter_k1 != out.k1)
      throw std::logic_error("escalation: k1 closed form disagrees with direct iteration");
  }

  // beta(x_0) bound with the certified walk thresholds
  double l0a = lambda0(p0, delta, Lambda0Method::analytic_upper, 1e-9, 0).value;
  double l0b = lambda0(p1, delta, Lambda0Method::analytic_upper, 1e-9, 0).value;

  // does the supplied rule actually satisfy the no-escalating-pair hypothesis
  // along the built magnitudes?
  auto beta_at = [&](double gnorm) { return alpha.at_norm(gnorm) * gnorm; };
  long pair_index = 0;
  auto scan_pairs = [&](const std::vector<double>& seq, double threshold) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i, ++pair_index) {
      if (beta_at(seq[i]) / beta_at(seq[i + 1]) >= threshold) {
        if (out.hypothesis_holds) out.first_escalating_pair = pair_index;
        out.hypothesis_holds = false;
        return;
      }
    }
  };
  scan_pairs(out.x_norms, l0a);
  if (out.hypothesis_holds) scan_pairs(out.y_norms, l0b);
  out.b0 = (2.0 * p0 - 1.0) * (1.0 - p0) / (2.0 * p0 * p0 * eps) * (s1 + s2 * eps) + q0;
  double rise = (s2 + 1.0) * (2.0 * p1 - 1.0) + 1.0;
  out.b1 = (q1 * (s1 + (s2 - p1 / (1.0 - p1)) * G) * rise - s1) /
           ((s1 + (s2 - 1.0) * eps) * rise - s1);
  out.phi0 = std::log(1.0 / l0a) / std::log(p0 / (1.0 - p0));
  out.phi1 = std::log(1.0 / l0b) / std::log(r1);
  double m_bar = 4.0 / L1 * std::log1p(params.Delta * L1 * L1 / params.L0);
  out.alpha0_bound = 4.0 * m_bar / (l0a * l0b) * std::pow(out.b0, -out.phi0) *
                     std::pow(out.b1, -out.phi1);
  return out;
}

SweepResult run_sweep(const std::string& axis,
                      const std::function<ProblemInstance(double)>& make_instance,
                      const std::function<OptimizerConfig(double)>& make_config,
                      const std::function<double(double)>& eps_of,
                      const std::vector<double>& values, const std::vector<std::uint64_t>& seeds,
                      long T_cap, ExecMode mode) {
  if (values.empty() || seeds.empty())
    throw std::invalid_argument("run_sweep: values and seeds must be nonempty");
  SweepResult out;
  out.axis = axis;
  const std::size_t nv = values.size(), ns = seeds.size();
  out.rows.assign(nv * ns, {});

  parallel_for(static_cast<std::int64_t>(nv * ns), mode, [&](std::int64_t idx) {
    std::size_t vi = static_cast<std::size_t>(idx) / ns;
    std::size_t si = static_cast<std::size_t>(idx) % ns;
    double value = values[vi];
    ProblemInstance inst = make_instance(value);
    OptimizerConfig cfg = make_config(value);
    HittingTimeResult h = measure_hitting_time(inst, cfg, eps_of(value), T_cap, seeds[si]);
    out.rows[static_cast<std::size_t>(idx)] = {value, seeds[si], h.t_eps, h.lower_bound};
  });

  std::vector<std::pair<double, double>> grid;
  bool all_reached = true;
  for (const auto& row : out.rows) {
    if (row.t_eps == kNotReached || row.t_eps < 1) {
      all_reached = false;
      continue;
    }
    grid.emplace_back(row.param, static_cast<double>(row.t_eps));
  }
  if (all_reached && grid.size() >= 4) {
    out.fit = fit_scaling_exponent(grid);
    out.fitted = true;
  }
  return out;
}

}  // namespace rsmooth
