#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rsmooth/chain.hpp"
#include "rsmooth/instances.hpp"
#include "rsmooth/optimizers.hpp"
#include "rsmooth/parallel.hpp"

namespace rsmooth {

// Exact-trajectory verification of the divergence construction:
// (a) jump feasibility ell_t >= 4 m_{t+1} for t <= t_max (log-domain);
// (b) the induction step x_t = d_t: from x = d_t exactly, one shared-rate
//     decorrelated update lands on d_{t+1} within relative 1e-9, for every
//     representable t (the free-running double trajectory is also scanned,
//     but each jump amplifies absolute roundoff by about L1 ell_t, so it
//     detaches from the knots after a few steps no matter the arithmetic);
// (c) |f'(d_t)| = g_t >= Delta L1 throughout, plus the log-domain floor
//     g_t >= g_0 out to t_max.
struct ChainVerification {
  bool ok = false;
  bool feasibility_ok = false;
  bool induction_ok = false;
  bool gradient_floor_ok = false;
  long first_fail_t = -1;
  std::string what;
  long prefix = 0;
  long t_max = 0;
  long induction_steps = 0;
  double max_rel_err_landing = 0.0;
  double max_rel_err_slope = 0.0;
  long free_run_faithful = 0;  // consecutive free-run steps with x_t = d_t to 1e-9
};

ChainVerification verify_chain_divergence(const ProblemParams& params, double eta, double gamma,
                                          long t_max);

inline constexpr long kNotReached = -1;

struct HittingTimeResult {
  long t_eps = kNotReached;  // first t with |grad f(x_t)| < eps
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  std::string config;
};

HittingTimeResult measure_hitting_time(const ProblemInstance& inst, const OptimizerConfig& cfg,
                                       double eps, long T_cap, std::uint64_t seed);

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares of log(t) against log(param); needs >= 4 points, all with
// finite positive hitting times.
PowerFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& grid);

struct TrickyPairReport {
  bool collinear = false;
  bool sign_opposed = false;       // sign c1 != sign c2
  bool magnitudes_above_eps = false;
  bool c1_within_cap = false;
  bool c2_above_branch_min = false;
  bool c2_below_cap = false;
  bool ratio_at_least_lambda0 = false;
  bool first_branch = false;  // which |c2| lower-bound branch applied
  double c1 = 0.0, c2 = 0.0;
  double lambda_ratio = 0.0;   // beta(g1) / beta(g2)
  double lambda0_ref = 0.0;    // certified threshold at (p, delta)
  double G = 0.0;
  bool tricky() const {
    return collinear && sign_opposed && magnitudes_above_eps && c1_within_cap &&
           c2_above_branch_min && c2_below_cap && ratio_at_least_lambda0;
  }
};

TrickyPairReport check_tricky_pair(const StepSizeFn& alpha, const Vec& g1, const Vec& g2,
                                   double p, double delta, const ProblemParams& params);

struct EscalationResult {
  std::vector<double> x_norms;  // |x_0| .. |x_k0|
  std::vector<double> y_norms;  // |y_0| .. |y_k1|
  long k0 = 0, k1 = 0;
  double b0 = 0.0, b1 = 0.0;
  double phi0 = 0.0, phi1 = 0.0;
  double alpha0_bound = 0.0;  // bound on beta(x_0) = alpha(g) |g| at |g| = eps
  // The bound presumes every consecutive escalation pair fails the
  // step-length-ratio condition; a rule where some pair passes it walks a
  // divergent biased walk instead, and the bound does not constrain it.
  bool hypothesis_holds = true;
  long first_escalating_pair = -1;
};

EscalationResult escalation_sequences(const StepSizeFn& alpha, double p0, double p1,
                                      const ProblemParams& params, double eps, double delta);

struct SweepPoint {
  double param = 0.0;
  std::uint64_t seed = 0;
  long t_eps = kNotReached;
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  std::string axis;
  std::vector<SweepPoint> rows;  // ordered by (value index, seed index)
  bool fitted = false;
  PowerFit fit;
};

SweepResult run_sweep(const std::string& axis,
                      const std::function<ProblemInstance(double)>& make_instance,
                      const std::function<OptimizerConfig(double)>& make_config,
                      const std::function<double(double)>& eps_of,
                      const std::vector<double>& values, const std::vector<std::uint64_t>& seeds,
                      long T_cap, ExecMode mode = ExecMode::parallel);

}  // namespace rsmooth
