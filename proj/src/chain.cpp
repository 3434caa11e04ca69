#include "rsmooth/chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rsmooth {

double chain_gamma_max(const ProblemParams& p, double eta) {
  return eta * p.Delta * p.L1 * p.L1 /
         (8.0 * std::log1p(48.0 * p.Delta * p.L1 * p.L1 / p.L0));
}

ChainSchedule chain_schedule(const ProblemParams& params, double eta, double gamma, long t_max,
                             double growth_c) {
  params.validate_base();
  const double L0 = params.L0, L1 = params.L1, Delta = params.Delta;
  if (!(Delta * L1 * L1 >= L0))
    throw std::domain_error("chain: requires Delta*L1^2 >= L0");
  if (!(eta >= 1.0 / L1)) throw std::domain_error("chain: requires eta >= 1/L1");
  if (!(gamma > 0.0)) throw std::domain_error("chain: gamma > 0 required");
  if (!(gamma <= chain_gamma_max(params, eta)))
    throw std::domain_error(
        "chain: requires gamma <= eta*Delta*L1^2 / (8 log(1 + 48 Delta L1^2 / L0))");
  if (t_max < 0) throw std::domain_error("chain: t_max >= 0 required");
  if (!(growth_c > 0.0)) throw std::domain_error("chain: growth constant must be positive");

  ChainSchedule s;
  s.params = params;
  s.eta = eta;
  s.gamma = gamma;
  s.growth_c = growth_c;
  s.t_max = t_max;

  const std::size_t n = static_cast<std::size_t>(t_max) + 2;
  s.g.resize(n);
  s.m.resize(n);
  s.ell.resize(n);
  s.d.resize(n);

  const double log_dl1 = std::log(Delta * L1);
  const double log_l1_over_l0 = std::log(L1 / L0);
  for (std::size_t t = 0; t < n; ++t) {
    double base = growth_c * (static_cast<double>(t) + 1.0) *
                  std::log1p(Delta * L1 * L1 * (static_cast<double>(t) + 1.0) / L0);
    s.g[t] = ExtendedScalar::from_log(1, static_cast<double>(t) * std::log(base) + log_dl1);
    // m_t = log1p(L1 g_t / L0) / L1, computed off the log magnitude
    double m_val = log1p_exp(s.g[t].logmag + log_l1_over_l0) / L1;
    s.m[t] = ExtendedScalar::from_double(m_val);
  }

  ExtendedScalar acc = ExtendedScalar::from_double(gamma * gamma);
  ExtendedScalar eta_xs = ExtendedScalar::from_double(eta);
  s.d[0] = ExtendedScalar::zero();
  for (std::size_t t = 0; t < n; ++t) {
    s.ell[t] = xs_div(xs_mul(eta_xs, s.g[t]), xs_sqrt(acc));
    if (t + 1 < n) s.d[t + 1] = xs_add_same_sign(s.d[t], s.ell[t]);
    acc = xs_add_same_sign(acc, xs_pow_int(s.g[t], 2));
  }

  const ExtendedScalar four = ExtendedScalar::from_double(4.0);
  for (long t = 0; t <= t_max; ++t) {
    std::size_t i = static_cast<std::size_t>(t);
    if (xs_compare(s.ell[i], xs_mul(four, s.m[i + 1])) < 0)
      throw std::logic_error("chain: jump feasibility ell_t >= 4 m_{t+1} violated at t = " +
                             std::to_string(t));
  }

  s.g_d.resize(n);
  s.m_d.resize(n);
  s.ell_d.resize(n);
  s.d_d.resize(n);
  s.f_knot_d.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    s.g_d[t] = s.g[t].to_double();
    s.m_d[t] = s.m[t].to_double();
    s.ell_d[t] = s.ell[t].to_double();
    s.d_d[t] = s.d[t].to_double();
  }
  // Offset of piece t so that the profile is continuous: piece t ends at
  // phi_t(ell_t) and piece t+1 opens at psi(m_{t+1}), so each knot adds the
  // riser gain g_{t+1} (ell_t - 3 m_{t+1} - m_t).
  for (std::size_t t = 0; t + 1 < n; ++t) {
    double riser = s.g_d[t + 1] * (s.ell_d[t] - 3.0 * s.m_d[t + 1] - s.m_d[t]);
    s.f_knot_d[t + 1] = s.f_knot_d[t] + riser;
  }

  s.gsq_d.assign(n, 0.0);
  s.gsq_d[0] = gamma * gamma;
  for (std::size_t t = 0; t + 1 < n; ++t)
    s.gsq_d[t + 1] = s.gsq_d[t] + s.g_d[t] * s.g_d[t];

  s.prefix = -1;
  for (long t = 0; t <= t_max; ++t) {
    std::size_t i = static_cast<std::size_t>(t);
    bool ok = std::isfinite(s.g_d[i + 1]) && std::isfinite(s.gsq_d[i + 1]) &&
              std::isfinite(s.f_knot_d[i + 1]) && std::isfinite(s.ell_d[i]) &&
              std::isfinite(s.d_d[i + 1]);
    if (!ok) break;
    s.prefix = t;
  }
  if (s.prefix < 0) throw std::logic_error("chain: no representable prefix in plain doubles");
  return s;
}

ChainKnot chain_knot(const ChainSchedule& s, long t) {
  if (t < 0 || t > s.t_max) throw std::range_error("chain_knot: t outside the built schedule");
  std::size_t i = static_cast<std::size_t>(t);
  ExtendedScalar slope = s.g[i];
  slope.sign = -slope.sign;
  return {s.d[i], slope};
}

namespace {

struct ChainEval {
  std::shared_ptr<const ChainSchedule> s;

  double psi_of_m(std::size_t t) const {
    const double L0 = s->params.L0, L1 = s->params.L1;
    return s->g_d[t] / L1 - (L0 / L1) * s->m_d[t];
  }

  long piece_index(double x) const {
    if (x < 0.0) return 0;
    // max { t : d_t <= x }
    auto it = std::upper_bound(s->d_d.begin(), s->d_d.begin() + s->prefix + 2, x);
    long j = static_cast<long>(it - s->d_d.begin()) - 1;
    if (j > s->prefix)
      throw std::range_error("chain: evaluation beyond the plain-real prefix (t > " +
                             std::to_string(s->prefix) + "); use the knot interface");
    return std::max<long>(j, 0);
  }

  double value(double x) const {
    long j = piece_index(x);
    std::size_t t = static_cast<std::size_t>(j);
    double u = x - s->d_d[t];
    const double L0 = s->params.L0, L1 = s->params.L1;
    double mt = s->m_d[t], mt1 = s->m_d[t + 1], lt = s->ell_d[t], gt1 = s->g_d[t + 1];
    double base = s->f_knot_d[t];
    if (u <= mt + mt1) return base + psi_value_raw(u - mt, L0, L1);
    if (u < lt - 2.0 * mt1) return base + gt1 * (u - mt - mt1) + psi_of_m(t + 1);
    return base - psi_value_raw(u - lt + mt1, L0, L1) + 2.0 * psi_of_m(t + 1) +
           gt1 * (lt - 3.0 * mt1 - mt);
  }

  double slope(double x) const {
    long j = piece_index(x);
    std::size_t t = static_cast<std::size_t>(j);
    double u = x - s->d_d[t];
    const double L0 = s->params.L0, L1 = s->params.L1;
    double mt = s->m_d[t], mt1 = s->m_d[t + 1], lt = s->ell_d[t], gt1 = s->g_d[t + 1];
    if (u <= mt + mt1) return psi_prime_raw(u - mt, L0, L1);
    if (u < lt - 2.0 * mt1) return gt1;
    return -psi_prime_raw(u - lt + mt1, L0, L1);
  }
};

}  // namespace

ProblemInstance chain_objective(std::shared_ptr<const ChainSchedule> schedule) {
  if (!schedule) throw std::invalid_argument("chain_objective: null schedule");
  ChainEval ev{schedule};

  ProblemInstance inst;
  inst.family = "chain";
  inst.dim = 1;
  inst.x0 = {0.0};
  inst.params = schedule->params;
  inst.cls = {NoiseClass::bounded_noise, 0.0, 0.0, 0.0};
  inst.value = [ev](const Vec& x) { return ev.value(x[0]); };
  inst.gradient = [ev](const Vec& x, Vec& g) { g[0] = ev.slope(x[0]); };
  inst.analytic_inf = 0.0;
  inst.oracle.kind = OracleKind::deterministic;

  const ChainSchedule& s = *schedule;
  long hi_knot = std::min<long>(s.prefix, 6);
  double lo = -(s.m_d[0] + 1.0 / s.params.L1);
  double hi =
      s.d_d[static_cast<std::size_t>(hi_knot)] + 0.5 * s.ell_d[static_cast<std::size_t>(hi_knot)];
  // keep |x| small enough that the default finite-difference step
  // h = 1e-5 |x|_inf stays within the exp-scale truncation budget
  hi = std::min(hi, 200.0 / s.params.L1);
  inst.sample_lo = {lo};
  inst.sample_hi = {hi};
  return inst;
}

}  // namespace rsmooth
