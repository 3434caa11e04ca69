#include "rsmooth/instances.hpp"

#include <cmath>
#include <stdexcept>

namespace rsmooth {

namespace {

int first_zero_coord(const Vec& x, int from, int to_excl) {
  for (int i = from; i < to_excl; ++i)
    if (x[static_cast<std::size_t>(i)] == 0.0) return i;
  return -1;
}

void fill_uniform_box(ProblemInstance& inst, double lo, double hi) {
  inst.sample_lo.assign(static_cast<std::size_t>(inst.dim), lo);
  inst.sample_hi.assign(static_cast<std::size_t>(inst.dim), hi);
}

void assert_noise_bound(const ProblemInstance& inst, const Vec& grad, const Vec& draw) {
  Vec dev = draw;
  axpy(-1.0, grad, dev);
  double d = norm(dev);
  double bound = inst.cls.kind == NoiseClass::bounded_noise
                     ? inst.cls.sigma
                     : inst.cls.sigma1 + inst.cls.sigma2 * norm(grad);
  if (d > bound * (1.0 + 1e-9) + 1e-300)
    throw std::logic_error("oracle draw violated the declared noise bound: |F - grad| = " +
                           std::to_string(d) + " > " + std::to_string(bound));
}

}  // namespace

void ProblemParams::validate_base() const {
  if (!(Delta > 0.0)) throw std::domain_error("params: Delta > 0 required");
  if (!(L0 > 0.0)) throw std::domain_error("params: L0 > 0 required");
  if (!(L1 > 0.0)) throw std::domain_error("params: L1 > 0 required");
  if (!(sigma >= 0.0) || !(sigma1 >= 0.0) || !(sigma2 >= 0.0))
    throw std::domain_error("params: noise constants must be nonnegative");
  if (!(epsilon > 0.0)) throw std::domain_error("params: epsilon > 0 required");
}

Vec oracle_draw(const ProblemInstance& inst, const Vec& x, const Vec& grad,
                RandomStream& stream) {
  Vec out;
  switch (inst.oracle.kind) {
    case OracleKind::deterministic:
      return grad;
    case OracleKind::coordinate_rademacher:
      out = draw_coordinate_rademacher(grad, inst.oracle.sigma, inst.noise_coord(x), stream);
      break;
    case OracleKind::scaling_dropout:
      out = draw_scaling_dropout(grad, inst.oracle.scale, stream);
      break;
    case OracleKind::two_point: {
      int s = inst.region_sign(x);
      if (s == 0) {
        stream.uniform();  // keep the one-draw-per-step alignment
        return grad;
      }
      out = draw_two_point(inst.oracle.g1, inst.oracle.g2, inst.oracle.p, s, stream);
      break;
    }
  }
  assert_noise_bound(inst, grad, out);
  return out;
}

ProblemInstance psi_objective(const ProblemParams& params) {
  params.validate_base();
  const double L0 = params.L0, L1 = params.L1;

  ProblemInstance inst;
  inst.family = "psi";
  inst.dim = 1;
  inst.x0 = {0.0};
  inst.params = params;
  inst.cls = {NoiseClass::bounded_noise, params.sigma, 0.0, 0.0};
  inst.value = [L0, L1](const Vec& x) { return psi_value_raw(x[0], L0, L1); };
  inst.gradient = [L0, L1](const Vec& x, Vec& g) { g[0] = psi_prime_raw(x[0], L0, L1); };
  inst.analytic_inf = 0.0;
  inst.oracle.kind = OracleKind::deterministic;
  fill_uniform_box(inst, -3.0 / L1, 3.0 / L1);
  return inst;
}

ProblemInstance hinge_objective(const ProblemParams& params) {
  params.validate_base();
  const double L0 = params.L0, L1 = params.L1, eps = params.epsilon, Delta = params.Delta;
  if (!(eps < Delta * L1 / 2.0))
    throw std::domain_error("hinge: requires epsilon < Delta*L1/2");
  const double m = psi_prime_inverse(eps, L0, L1);
  const double psi_m = psi_value_raw(m, L0, L1);
  const double x0 = m + Delta / (2.0 * eps);

  ProblemInstance inst;
  inst.family = "hinge";
  inst.dim = 1;
  inst.x0 = {x0};
  inst.params = params;
  inst.cls = {NoiseClass::bounded_noise, params.sigma, 0.0, 0.0};
  inst.value = [=](const Vec& xv) {
    double x = xv[0];
    if (x > m) return eps * (x - m) + psi_m;
    if (x < -m) return -eps * (x + m) + psi_m;
    return psi_value_raw(x, L0, L1);
  };
  inst.gradient = [=](const Vec& xv, Vec& g) {
    double x = xv[0];
    if (x > m)
      g[0] = eps;
    else if (x < -m)
      g[0] = -eps;
    else
      g[0] = psi_prime_raw(x, L0, L1);
  };
  inst.analytic_inf = 0.0;
  inst.oracle.kind = OracleKind::deterministic;
  fill_uniform_box(inst, -(x0 + 1.0), x0 + 1.0);
  return inst;
}

ProblemInstance coordwise_exp_objective(const ProblemParams& params, long T) {
  params.validate_base();
  if (T < 1) throw std::domain_error("coordwise: T >= 1 required");
  const double L0 = params.L0, L1 = params.L1, eps = params.epsilon;
  if (!(eps < params.Delta * L1))
    throw std::domain_error("coordwise: requires 0 < epsilon < Delta*L1");
  const double m = psi_prime_inverse(eps, L0, L1);
  const int d = static_cast<int>(T);

  ProblemInstance inst;
  inst.family = "coordwise";
  inst.dim = d;
  inst.x0.assign(static_cast<std::size_t>(d), 0.0);
  inst.x0[0] = m;
  inst.params = params;
  inst.cls = {NoiseClass::bounded_noise, params.sigma, 0.0, 0.0};
  inst.value = [L0, L1](const Vec& x) {
    double s = 0.0;
    for (double xi : x) s += psi_value_raw(xi, L0, L1);
    return s;
  };
  inst.gradient = [L0, L1](const Vec& x, Vec& g) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = psi_prime_raw(x[i], L0, L1);
  };
  inst.analytic_inf = 0.0;
  inst.oracle.kind = OracleKind::coordinate_rademacher;
  inst.oracle.sigma = params.sigma;
  auto hits = inst.fallback_hits;
  inst.noise_coord = [d, hits](const Vec& x) {
    int j = first_zero_coord(x, 0, d);
    if (j < 0) ++*hits;  // selector names no coordinate here; no injection
    return j;
  };
  fill_uniform_box(inst, -(2.0 * m + 1.0 / L1), 2.0 * m + 1.0 / L1);
  return inst;
}

ProblemInstance drori_objective(const ProblemParams& params, double eta, double gamma, long T) {
  params.validate_base();
  if (T < 2) throw std::domain_error("drori: T >= 2 required");
  if (!(gamma > 0.0)) throw std::domain_error("drori: gamma > 0 required");
  const double L0 = params.L0, L1 = params.L1, eps = params.epsilon;
  const double sg = params.sigma;
  const double cap = std::min(std::sqrt(2.0) / 3.0 * std::sqrt(params.Delta * L0),
                              std::sqrt(params.Delta * L1 * gamma / 3.0));
  if (!(eps <= cap))
    throw std::domain_error(
        "drori: requires epsilon <= min{ sqrt(2)/3 sqrt(Delta L0), sqrt(Delta L1 gamma / 3) }");

  const int d = static_cast<int>(T) + 1;
  // widths[c] for coordinate c in [1, T-1]: eta sigma / sqrt(gamma^2 + (c-1)(eps^2 + sigma^2)).
  // Accumulated exactly like the optimizer's squared-norm sum so that each
  // noisy landing hits its plateau edge bit for bit: the edge is an unstable
  // equilibrium of the update, and a one-ulp-inside landing would otherwise
  // escape exponentially over a few hundred steps.
  std::vector<double> widths(static_cast<std::size_t>(d), 0.0);
  const double gsq_step = eps * eps + sg * sg;
  double gsq_sum = 0.0;
  for (int c = 1; c < static_cast<int>(T); ++c) {
    widths[static_cast<std::size_t>(c)] = (eta / std::sqrt(gamma * gamma + gsq_sum)) * sg;
    gsq_sum += gsq_step;
  }

  auto bump_value = [L0](double u, double a) {
    double s = std::abs(u);
    if (s < 0.5 * a) return 0.5 * L0 * u * u;
    if (s <= a) return -0.5 * L0 * (s - a) * (s - a) + 0.25 * L0 * a * a;
    return 0.25 * L0 * a * a;
  };
  auto bump_prime = [L0](double u, double a) {
    double s = std::abs(u);
    double sign = u < 0 ? -1.0 : 1.0;
    if (s < 0.5 * a) return L0 * u;
    if (s <= a) return sign * L0 * (a - s);
    return 0.0;
  };

  ProblemInstance inst;
  inst.family = "drori";
  inst.dim = d;
  inst.x0.assign(static_cast<std::size_t>(d), 0.0);
  inst.params = params;
  inst.cls = {NoiseClass::bounded_noise, sg, 0.0, 0.0};
  inst.value = [widths, eps, bump_value, T](const Vec& x) {
    double s = eps * x[0];
    for (int c = 1; c < static_cast<int>(T); ++c)
      s += bump_value(x[static_cast<std::size_t>(c)], widths[static_cast<std::size_t>(c)]);
    return s;
  };
  inst.gradient = [widths, eps, bump_prime, T, d](const Vec& x, Vec& g) {
    g.assign(static_cast<std::size_t>(d), 0.0);
    g[0] = eps;
    for (int c = 1; c < static_cast<int>(T); ++c)
      g[static_cast<std::size_t>(c)] =
          bump_prime(x[static_cast<std::size_t>(c)], widths[static_cast<std::size_t>(c)]);
  };
  inst.gap_kind = GapCertKind::trajectory_surrogate;
  inst.surrogate_gap_fraction = 2.0 / 3.0;
  inst.intended = IntendedRun{"dan", eta, gamma, {}, T};
  inst.oracle.kind = OracleKind::coordinate_rademacher;
  inst.oracle.sigma = sg;
  auto hits = inst.fallback_hits;
  const int t_last = static_cast<int>(T) - 1;
  inst.noise_coord = [d, hits, t_last](const Vec& x) {
    int j = first_zero_coord(x, 1, d);
    if (j < 0) {
      ++*hits;  // fallback: the last bump coordinate
      return t_last;
    }
    return j;
  };
  double wmax = 0.0;
  for (double w : widths) wmax = std::max(wmax, w);
  fill_uniform_box(inst, -std::max(1.0, 2.0 * wmax), std::max(1.0, 2.0 * wmax));
  return inst;
}

ProblemInstance periodic_exp_objective(const Vec& g, double alpha_g, const ProblemParams& params) {
  params.validate_base();
  const double L0 = params.L0, L1 = params.L1;
  const double gn = norm(g);
  const double grad_cap = params.sigma1 + (params.sigma2 + 1.0) * params.Delta * L1;
  if (!(gn >= params.epsilon && gn <= grad_cap))
    throw std::domain_error(
        "periodic: requires |g| in [epsilon, sigma1 + (sigma2+1) Delta L1]");
  const double gt = std::min(gn, params.Delta * L1);  // |g~|
  const double scale = gn / gt;
  if (scale > 1.0 && !(params.sigma2 >= 1.0))
    throw std::domain_error("periodic: rescaled oracle needs sigma2 >= 1");
  const double m = psi_prime_inverse(gt, L0, L1);
  const double period = alpha_g * gn;  // m'
  if (!(period >= 4.0 * m))
    throw std::domain_error("periodic: period alpha(g)|g| must be >= 4m; period too small");
  const double psi_m = psi_value_raw(m, L0, L1);
  const double riser = gt * (period - 4.0 * m);  // gain per period

  Vec ghat = g;
  for (double& v : ghat) v /= gn;
  const int d = static_cast<int>(g.size());

  auto profile = [=](double pos) {  // phi on [0, period]
    if (pos <= 2.0 * m) return psi_value_raw(pos - m, L0, L1);
    if (pos < period - 2.0 * m) return gt * (pos - 2.0 * m) + psi_m;
    return -psi_value_raw(pos - (period - m), L0, L1) + riser + 2.0 * psi_m;
  };
  auto profile_prime = [=](double pos) {
    if (pos <= 2.0 * m) return psi_prime_raw(pos - m, L0, L1);
    if (pos < period - 2.0 * m) return gt;
    return -psi_prime_raw(pos - (period - m), L0, L1);
  };

  ProblemInstance inst;
  inst.family = "periodic";
  inst.dim = d;
  inst.x0.assign(static_cast<std::size_t>(d), 0.0);
  inst.params = params;
  inst.cls = {NoiseClass::affine_noise, 0.0, params.sigma1, params.sigma2};
  inst.value = [=](const Vec& x) {
    double proj = dot(x, ghat);
    if (proj > 0.0) return gt * proj + psi_m;
    double v = -proj;
    double k = std::floor(v / period);
    return profile(v - k * period) + riser * k;
  };
  inst.gradient = [=](const Vec& x, Vec& grad) {
    double proj = dot(x, ghat);
    double slope;
    if (proj > 0.0) {
      slope = gt;
    } else {
      double v = -proj;
      double k = std::floor(v / period);
      slope = -profile_prime(v - k * period);
    }
    for (int i = 0; i < d; ++i) grad[static_cast<std::size_t>(i)] = slope * ghat[static_cast<std::size_t>(i)];
  };
  inst.analytic_inf = 0.0;
  inst.oracle.kind = OracleKind::scaling_dropout;
  inst.oracle.scale = scale;
  fill_uniform_box(inst, -2.0 * period, 2.0 * period);
  return inst;
}

double tricky_gradient_cap(const ProblemParams& p) {
  return p.Delta * p.L1 / (1.0 + 4.0 * std::log1p(p.Delta * p.L1 * p.L1 / p.L0));
}

std::string describe_pair_violation(double c1_abs, double c2_abs, double p,
                                    const ProblemParams& params) {
  const double eps = params.epsilon, s1 = params.sigma1, s2 = params.sigma2;
  const double G = tricky_gradient_cap(params);
  const double q = (1.0 - p) / p;
  if (!(c1_abs >= eps && c2_abs >= eps))
    return "the magnitude floor |c1|, |c2| >= epsilon";
  if (!(c1_abs <= q * s1 + (q * s2 - 1.0) * G))
    return "the |c1| cap (1-p)/p sigma1 + ((1-p)/p sigma2 - 1) G";
  double branch_split = q * s1 + (q * s2 - 1.0) * eps;
  double c2_min = c1_abs <= branch_split
                      ? (p * c1_abs + eps) / (1.0 - p)
                      : ((s2 + 1.0) * p * c1_abs - s1) / ((s2 + 1.0) * (1.0 - p) - 1.0);
  if (!(c2_abs >= c2_min)) return "the |c2| lower bound (branch on |c1|)";
  if (!(c2_abs <= (p * c1_abs + G) / (1.0 - p)))
    return "the |c2| cap (p |c1| + G)/(1-p)";
  return "";
}

ProblemInstance tricky_linear_objective(const Vec& g1, const Vec& g2, double p,
                                        const ProblemParams& params, double beta_g2) {
  params.validate_base();
  if (!(params.sigma2 > 1.0))
    throw std::domain_error("tricky pair: sigma2 > 1 required");
  if (!(p > 0.5 && p < params.sigma2 / (params.sigma2 + 1.0)))
    throw std::domain_error("tricky pair: p in (1/2, sigma2/(sigma2+1)) required");
  const double L0 = params.L0, L1 = params.L1, eps = params.epsilon;
  const double n1 = norm(g1), n2 = norm(g2);
  if (!(n1 > 0.0 && n2 > 0.0))
    throw std::domain_error("tricky pair: both gradients must be nonzero");

  Vec ghat = g2;
  for (double& v : ghat) v /= n2;
  const double c2 = n2;
  const double c1 = dot(g1, ghat);
  // collinearity: g1 must lie on the line spanned by g2
  {
    Vec resid = g1;
    axpy(-c1, ghat, resid);
    if (norm(resid) > 1e-9 * n1)
      throw std::invalid_argument("tricky pair: gradients must share a common direction");
  }
  if (!(c1 < 0.0))
    throw std::domain_error("tricky pair: violates sign opposition (sign c1 != sign c2)");
  const double ell = p * c1 + (1.0 - p) * c2;
  if (!(ell >= eps))
    throw std::domain_error("tricky pair: expected slope p c1 + (1-p) c2 must be >= epsilon");
  {
    std::string bad = describe_pair_violation(std::abs(c1), c2, p, params);
    if (!bad.empty()) throw std::domain_error("tricky pair: violates " + bad);
  }
  const double a = psi_prime_inverse(ell, L0, L1);
  const double psi_a = psi_value_raw(a, L0, L1);
  const int d = static_cast<int>(g2.size());

  ProblemInstance inst;
  inst.family = "tricky";
  inst.dim = d;
  inst.params = params;
  inst.cls = {NoiseClass::affine_noise, 0.0, params.sigma1, params.sigma2};
  inst.x0.assign(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i)
    inst.x0[static_cast<std::size_t>(i)] = (a + beta_g2) * ghat[static_cast<std::size_t>(i)];
  inst.value = [=](const Vec& x) {
    double proj = dot(x, ghat);
    if (proj >= a) return ell * (proj - a) + psi_a;
    if (proj <= -a) return -ell * (proj + a) + psi_a;
    return psi_value_raw(proj, L0, L1);
  };
  inst.gradient = [=](const Vec& x, Vec& grad) {
    double proj = dot(x, ghat);
    double slope = proj >= a ? ell : (proj <= -a ? -ell : psi_prime_raw(proj, L0, L1));
    for (int i = 0; i < d; ++i) grad[static_cast<std::size_t>(i)] = slope * ghat[static_cast<std::size_t>(i)];
  };
  inst.analytic_inf = 0.0;
  inst.oracle.kind = OracleKind::two_point;
  inst.oracle.p = p;
  inst.oracle.g1.assign(static_cast<std::size_t>(d), 0.0);
  inst.oracle.g2.assign(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    inst.oracle.g1[static_cast<std::size_t>(i)] = c1 * ghat[static_cast<std::size_t>(i)];
    inst.oracle.g2[static_cast<std::size_t>(i)] = c2 * ghat[static_cast<std::size_t>(i)];
  }
  inst.region_sign = [ghat, a](const Vec& x) {
    double proj = dot(x, ghat);
    if (proj >= a) return 1;
    if (proj <= -a) return -1;
    return 0;
  };
  double r = std::abs(a + beta_g2) + a + 1.0;
  fill_uniform_box(inst, -r, r);
  return inst;
}

ProblemInstance quad_bump_objective(const StepSizeFn& alpha, const ProblemParams& params, long T) {
  params.validate_base();
  if (T < 2) throw std::domain_error("quad_bump: T >= 2 required");
  const double L0 = params.L0, eps = params.epsilon, s1 = params.sigma1;
  if (!(eps <= std::sqrt(params.Delta * L0 / 3.0)))
    throw std::domain_error("quad_bump: requires epsilon <= sqrt(Delta L0 / 3)");

  const int d = static_cast<int>(T) + 1;
  std::vector<double> left(static_cast<std::size_t>(d), 0.0);   // a: plateau at -a
  std::vector<double> right(static_cast<std::size_t>(d), 0.0);  // b: plateau at +b
  for (int c = 1; c < static_cast<int>(T); ++c) {
    Vec probe(static_cast<std::size_t>(d), 0.0);
    probe[0] = eps;
    probe[static_cast<std::size_t>(c)] = s1;
    double ap = alpha(probe);
    probe[static_cast<std::size_t>(c)] = -s1;
    double bp = alpha(probe);
    if (!(ap > 0.0) || !(bp > 0.0))
      throw std::domain_error(
          "quad_bump: alpha must be positive on the probed gradients (nonpositive step sizes "
          "belong to the divergence constructions)");
    left[static_cast<std::size_t>(c)] = s1 * ap;
    right[static_cast<std::size_t>(c)] = s1 * bp;
  }

  auto bump_value = [L0](double u, double a, double b) {
    if (u < -a) return 0.25 * L0 * a * a;
    if (u <= -0.5 * a) return -0.5 * L0 * (u + a) * (u + a) + 0.25 * L0 * a * a;
    if (u < 0.5 * b) return 0.5 * L0 * u * u;
    if (u <= b) return -0.5 * L0 * (u - b) * (u - b) + 0.25 * L0 * b * b;
    return 0.25 * L0 * b * b;
  };
  auto bump_prime = [L0](double u, double a, double b) {
    if (u < -a) return 0.0;
    if (u <= -0.5 * a) return -L0 * (u + a);
    if (u < 0.5 * b) return L0 * u;
    if (u <= b) return -L0 * (u - b);
    return 0.0;
  };

  ProblemInstance inst;
  inst.family = "quadbump";
  inst.dim = d;
  inst.x0.assign(static_cast<std::size_t>(d), 0.0);
  inst.params = params;
  inst.cls = {NoiseClass::affine_noise, 0.0, s1, params.sigma2};
  inst.value = [=](const Vec& x) {
    double s = eps * x[0];
    for (int c = 1; c < static_cast<int>(T); ++c)
      s += bump_value(x[static_cast<std::size_t>(c)], left[static_cast<std::size_t>(c)],
                      right[static_cast<std::size_t>(c)]);
    return s;
  };
  inst.gradient = [=](const Vec& x, Vec& g) {
    g.assign(static_cast<std::size_t>(d), 0.0);
    g[0] = eps;
    for (int c = 1; c < static_cast<int>(T); ++c)
      g[static_cast<std::size_t>(c)] =
          bump_prime(x[static_cast<std::size_t>(c)], left[static_cast<std::size_t>(c)],
                     right[static_cast<std::size_t>(c)]);
  };
  inst.gap_kind = GapCertKind::trajectory_surrogate;
  inst.surrogate_gap_fraction = 0.5;
  inst.intended = IntendedRun{"sgd", 0.0, 0.0, alpha, T};
  inst.oracle.kind = OracleKind::coordinate_rademacher;
  inst.oracle.sigma = s1;
  auto hits = inst.fallback_hits;
  inst.noise_coord = [d, hits](const Vec& x) {
    int j = first_zero_coord(x, 1, d);
    if (j < 0) ++*hits;
    return j;
  };
  double wmax = 1.0;
  for (int c = 1; c < static_cast<int>(T); ++c)
    wmax = std::max({wmax, 2.0 * left[static_cast<std::size_t>(c)],
                     2.0 * right[static_cast<std::size_t>(c)]});
  fill_uniform_box(inst, -wmax, wmax);
  return inst;
}

}  // namespace rsmooth
