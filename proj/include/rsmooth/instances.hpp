#pragma once

#include <atomic>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "rsmooth/numerics.hpp"
#include "rsmooth/oracles.hpp"
#include "rsmooth/psi.hpp"
#include "rsmooth/stepsize.hpp"

namespace rsmooth {

struct ProblemParams {
  double Delta = 1.0;
  double L0 = 1.0;
  double L1 = 1.0;
  double sigma = 0.0;   // bounded-noise level
  double sigma1 = 0.0;  // affine-noise constants
  double sigma2 = 0.0;
  double epsilon = 0.1;  // target stationarity

  void validate_base() const;
};

enum class NoiseClass { bounded_noise, affine_noise };

struct ClassTag {
  NoiseClass kind = NoiseClass::bounded_noise;
  double sigma = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

// How the initial-gap certificate is evaluated: against a closed-form infimum,
// or (for the unbounded linear-slope constructions) as a bound on -f(x_t)
// along the realized trajectory plus the 3 eps^2 / (2 L0) patching term.
enum class GapCertKind { closed_form, trajectory_surrogate };

// Which optimizer the trajectory-surrogate certificate replays.
struct IntendedRun {
  std::string optimizer;  // "dan" or "sgd"
  double eta = 1.0;
  double gamma = 1.0;
  StepSizeFn alpha;
  long T = 0;
};

struct ProblemInstance {
  std::string family;
  int dim = 1;
  Vec x0;
  ProblemParams params;
  ClassTag cls;

  std::function<double(const Vec&)> value;
  std::function<void(const Vec&, Vec&)> gradient;

  double analytic_inf = 0.0;
  GapCertKind gap_kind = GapCertKind::closed_form;
  double surrogate_gap_fraction = 0.0;  // bound on -f(x_t), as a fraction of Delta
  std::optional<IntendedRun> intended;

  OracleSpec oracle;
  // 0-based coordinate receiving the rademacher injection; -1 = fallback.
  std::function<int(const Vec&)> noise_coord;
  // two_point: +1 / -1 outside the valley, 0 inside (oracle returns the exact gradient).
  std::function<int(const Vec&)> region_sign;
  std::shared_ptr<std::atomic<long>> fallback_hits =
      std::make_shared<std::atomic<long>>(0);

  // Certification sampling box (per coordinate).
  Vec sample_lo, sample_hi;

  Vec grad_at(const Vec& x) const {
    Vec g(dim);
    gradient(x, g);
    return g;
  }
};

// One draw of the instance's oracle; asserts the declared noise bound on the
// spot (bounded: |F - grad| <= sigma; affine: <= sigma1 + sigma2 |grad|).
Vec oracle_draw(const ProblemInstance& inst, const Vec& x, const Vec& grad, RandomStream& stream);

// f(x) = psi(x), one-dimensional.
ProblemInstance psi_objective(const ProblemParams& params);

// One-dimensional valley with linear wings of slope epsilon; x0 = m + Delta/(2 eps).
ProblemInstance hinge_objective(const ProblemParams& params);

// f(x) = sum_i psi(x_i) over T coordinates, noise injected into the first
// zero coordinate; x0 = m e_1 with psi'(m) = epsilon.
ProblemInstance coordwise_exp_objective(const ProblemParams& params, long T);

// Slope-epsilon coordinate plus per-coordinate bumps sized by the shared
// adaptive step size; dimension T + 1.
ProblemInstance drori_objective(const ProblemParams& params, double eta, double gamma, long T);

// Periodic-plus-linear profile along g/|g| with period m' = alpha_g * |g|;
// requires m' >= 4 m.
ProblemInstance periodic_exp_objective(const Vec& g, double alpha_g, const ProblemParams& params);

// Delta L1 / (1 + 4 log(1 + Delta L1^2 / L0)): the gradient-magnitude budget
// of the single-step constructions.
double tricky_gradient_cap(const ProblemParams& params);

// Magnitude-window conditions on (|c1|, |c2|) at branch probability p; empty
// string when all hold, otherwise the violated condition.
std::string describe_pair_violation(double c1_abs, double c2_abs, double p,
                                    const ProblemParams& params);

// Valley with linear wings of slope ell = p c1 + (1-p) c2 along the common
// direction of the pair; two-point oracle; x0 = (a + beta_g2) ghat where
// beta_g2 = alpha(g2) |g2|.
ProblemInstance tricky_linear_objective(const Vec& g1, const Vec& g2, double p,
                                        const ProblemParams& params, double beta_g2);

// Slope-epsilon coordinate plus double-plateau bumps whose widths are set by
// alpha on the two possible noisy gradients; dimension T + 1.
ProblemInstance quad_bump_objective(const StepSizeFn& alpha, const ProblemParams& params, long T);

}  // namespace rsmooth
