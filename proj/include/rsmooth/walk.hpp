#pragma once

#include <cstdint>

#include "rsmooth/numerics.hpp"
#include "rsmooth/parallel.hpp"

namespace rsmooth {

// Unique root in (0, 1) of h_lambda(x) = p x^(lambda+1) - x + (1-p), which
// exists iff lambda > (1-p)/p. Found by bisection to absolute tolerance tol.
double h_lambda_root(double p, double lambda, double tol);

struct WalkEstimate {
  double p = 0.0;
  double lambda = 0.0;
  double z_hat = 0.0;         // fraction of walks from X0 = 1 that reached <= 0
  double ci_halfwidth = 0.0;  // Wilson 95%
  long horizon = 0;
  double barrier = 0.0;
  long n_mc = 0;
  // Walks stopped at the barrier (or horizon) count as survivors, so z_hat is
  // biased downward; past the barrier the residual death probability is at
  // most r(lambda)^barrier (1.0 when no root exists).
  double bias_bound = 1.0;
};

struct WalkConfig {
  long horizon = 100000;
  double barrier = 1000.0;
  long n_mc = 200000;
  ExecMode mode = ExecMode::parallel;
};

WalkEstimate walk_hit_probability(double p, double lambda, long horizon, double barrier,
                                  long n_mc, std::uint64_t seed,
                                  ExecMode mode = ExecMode::parallel);

enum class Lambda0Method { analytic_upper, mc_bisect };

struct LambdaResult {
  double value = 0.0;  // point estimate; interval midpoint for mc_bisect
  double lo = 0.0;
  double hi = 0.0;
};

// Smallest lambda making the walk survive with probability >= delta.
// delta = 0 returns (1-p)/p exactly. analytic_upper bisects the martingale
// root r(lambda) <= 1-delta (a certified upper bound on the true threshold);
// mc_bisect bisects the MC estimate of z over [(1-p)/p, analytic_upper].
LambdaResult lambda0(double p, double delta, Lambda0Method method, double tol,
                     std::uint64_t seed, const WalkConfig& wc = {});

// max(0, lambda0_estimate - (1-p)/p): guards MC estimates dipping below the
// analytic floor.
double zeta_from_lambda0(double p, double lambda0_estimate);

struct GammaConstants {
  int regime = 0;  // 3: sigma2 >= 3 (values are gamma1..gamma3); 2: sigma2 in (1,3) (gamma4..gamma6)
  double p = 0.0;
  double first = 0.0, second = 0.0, third = 0.0;
};

// The walk probability parameter used by each sigma2 regime.
double gamma_constants_p(double sigma2);
GammaConstants gamma_constants(double sigma2, double delta, double zeta_value);

// Largest k with a_k <= A for a_{i+1} = r a_i + b, a_0 > 0, r > 1;
// closed form with a local boundary adjustment against the exact recurrence.
long exp_seq_count(double a0, double r, double b, double A);

}  // namespace rsmooth
