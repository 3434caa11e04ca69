#include "rsmooth/walk.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rsmooth {

double h_lambda_root(double p, double lambda, double tol) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("h_lambda_root: p in (0,1) required");
  if (!(lambda > (1.0 - p) / p))
    throw std::domain_error(
        "h_lambda_root: no interior root; requires lambda > (1-p)/p");
  if (!(tol > 0.0)) throw std::domain_error("h_lambda_root: tol > 0 required");
  auto h = [&](double x) { return p * std::pow(x, lambda + 1.0) - x + (1.0 - p); };
  // h is strictly convex with h(0) = 1-p > 0 and h(1) = 0; its minimizer
  // x* = (p(lambda+1))^(-1/lambda) < 1 has h(x*) < 0, so the root lies in (0, x*).
  double xstar = std::pow(1.0 / (p * (lambda + 1.0)), 1.0 / lambda);
  double lo = 0.0, hi = xstar;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

WalkEstimate walk_hit_probability(double p, double lambda, long horizon, double barrier,
                                  long n_mc, std::uint64_t seed, ExecMode mode) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("walk: p in (0,1) required");
  if (horizon < 1) throw std::domain_error("walk: horizon >= 1 required");
  if (n_mc < 1) throw std::domain_error("walk: n_mc >= 1 required");
  if (!(lambda >= 0.0)) throw std::domain_error("walk: lambda >= 0 required");

  RandomStream root{seed, 0};
  const long block = 4096;
  const long n_blocks = (n_mc + block - 1) / block;
  std::vector<long> hits_per_block(static_cast<std::size_t>(n_blocks), 0);

  parallel_for(n_blocks, mode, [&](std::int64_t b) {
    long lo = b * block;
    long hi = std::min(n_mc, lo + block);
    long hits = 0;
    for (long r = lo; r < hi; ++r) {
      RandomStream s = root.split(static_cast<std::uint64_t>(r));
      double x = 1.0;
      for (long t = 0; t < horizon; ++t) {
        x += s.uniform() < p ? lambda : -1.0;
        if (x <= 0.0) {
          ++hits;
          break;
        }
        if (x >= barrier) break;
      }
    }
    hits_per_block[static_cast<std::size_t>(b)] = hits;
  });

  long hits = 0;
  for (long h : hits_per_block) hits += h;

  WalkEstimate est;
  est.p = p;
  est.lambda = lambda;
  est.horizon = horizon;
  est.barrier = barrier;
  est.n_mc = n_mc;
  est.z_hat = static_cast<double>(hits) / static_cast<double>(n_mc);
  const double z95 = 1.959963984540054;
  double n = static_cast<double>(n_mc);
  double ph = est.z_hat;
  est.ci_halfwidth =
      z95 * std::sqrt(ph * (1.0 - ph) / n + z95 * z95 / (4.0 * n * n)) / (1.0 + z95 * z95 / n);
  if (lambda > (1.0 - p) / p) {
    double r = h_lambda_root(p, lambda, 1e-12);
    est.bias_bound = std::exp(barrier * std::log(r));
  } else {
    est.bias_bound = 1.0;
  }
  return est;
}

namespace {

double lambda0_analytic(double p, double delta, double tol) {
  // smallest lambda with r(lambda) <= 1 - delta
  double target = 1.0 - delta;
  double lo = (1.0 - p) / p;
  double hi = lo + 1.0;
  while (h_lambda_root(p, hi, 1e-13) > target) hi *= 2.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= (1.0 - p) / p || h_lambda_root(p, mid, 1e-13) > target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;  // certified side: r(hi) <= 1 - delta
}

}  // namespace

LambdaResult lambda0(double p, double delta, Lambda0Method method, double tol,
                     std::uint64_t seed, const WalkConfig& wc) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("lambda0: p in (0,1) required");
  if (!(delta >= 0.0 && delta < p))
    throw std::domain_error("lambda0: delta in [0, p) required");
  if (!(tol > 0.0)) throw std::domain_error("lambda0: tol > 0 required");

  if (delta == 0.0) {
    double v = (1.0 - p) / p;
    return {v, v, v};
  }
  double upper = lambda0_analytic(p, delta, std::min(tol, 1e-9));
  if (method == Lambda0Method::analytic_upper) return {upper, upper - tol, upper};

  // mc_bisect: z is monotone decreasing in lambda; z(upper) <= 1-delta is
  // certified by the martingale bound, so [floor, upper] brackets the
  // threshold.
  double lo = (1.0 - p) / p;
  double hi = upper;
  std::uint64_t eval = 0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    WalkEstimate est = walk_hit_probability(p, mid, wc.horizon, wc.barrier, wc.n_mc,
                                            seed + 1000003 * (++eval), wc.mode);
    if (est.z_hat > 1.0 - delta)
      lo = mid;
    else
      hi = mid;
  }
  return {0.5 * (lo + hi), lo, hi};
}

double zeta_from_lambda0(double p, double lambda0_estimate) {
  return std::max(0.0, lambda0_estimate - (1.0 - p) / p);
}

double gamma_constants_p(double sigma2) {
  if (!(sigma2 > 1.0)) throw std::domain_error("gamma constants: sigma2 > 1 required");
  return sigma2 >= 3.0 ? 2.0 / 3.0 : (sigma2 + 5.0) / 12.0;
}

GammaConstants gamma_constants(double sigma2, double delta, double zeta_value) {
  if (!(sigma2 > 1.0))
    throw std::domain_error("gamma constants: sigma2 > 1 required (sigma2 <= 1 is out of scope)");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::domain_error("gamma constants: delta in [0,1) required");
  if (!(zeta_value >= 0.0)) throw std::domain_error("gamma constants: zeta >= 0 required");

  GammaConstants out;
  out.p = gamma_constants_p(sigma2);
  double lognum = std::log1p(2.0 * zeta_value);
  if (sigma2 >= 3.0) {
    out.regime = 3;
    double logden = std::log(2.0 + 6.0 / (sigma2 - 2.0));
    out.first = lognum / std::log(2.0);
    out.second = 1.0 - std::log(2.0) / logden;
    out.third = lognum / logden;
  } else {
    out.regime = 2;
    double log_a = std::log(12.0 / (7.0 - sigma2) - 1.0);
    double log_b = std::log(18.0 / (sigma2 - 1.0) - 1.0);
    out.first = lognum / log_a;
    out.second = 1.0 - log_a / log_b;
    out.third = lognum / log_b;
  }
  return out;
}

long exp_seq_count(double a0, double r, double b, double A) {
  if (!(a0 > 0.0)) throw std::domain_error("exp_seq_count: a0 > 0 required");
  if (!(r > 1.0)) throw std::domain_error("exp_seq_count: r > 1 required");
  if (!(A >= a0)) throw std::domain_error("exp_seq_count: A >= a0 required");
  double c = a0 * (r - 1.0) + b;
  if (!(c > 0.0)) throw std::domain_error("exp_seq_count: a0 (r-1) + b > 0 required");

  auto a_at = [&](long i) {
    // a_i = r^i (a0 + b/(r-1)) - b/(r-1)
    double q = b / (r - 1.0);
    return std::pow(r, static_cast<double>(i)) * (a0 + q) - q;
  };
  double kf = std::log((A * (r - 1.0) + b) / c) / std::log(r);
  long k = static_cast<long>(std::floor(kf));
  if (k < 0) k = 0;
  while (k > 0 && a_at(k) > A) --k;
  while (a_at(k + 1) <= A) ++k;
  return k;
}

}  // namespace rsmooth
