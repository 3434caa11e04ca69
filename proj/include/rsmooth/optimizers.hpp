#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "rsmooth/instances.hpp"
#include "rsmooth/stepsize.hpp"

namespace rsmooth {

enum class OptimizerKind {
  decorrelated_adagrad_norm,  // shared rate, squared-norm sum through t-1
  adagrad,                    // per-coordinate, squared sum through t
  decorrelated_adagrad,       // per-coordinate, squared sum through t-1
  single_step                 // x - alpha(g) g
};

std::string optimizer_name(OptimizerKind k);
OptimizerKind optimizer_from_name(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::decorrelated_adagrad_norm;
  double eta = 1.0;
  double gamma = 1.0;
  StepSizeFn alpha;  // single_step only
};

struct OptimizerState {
  Vec x;
  double scalar_sum = 0.0;  // norm variants: sum of squared gradient norms
  Vec coord_sums;           // coordinate variants: element-wise squared sums
  long t = 0;
};

OptimizerState make_state(const Vec& x0, OptimizerKind kind);

// Pure transitions. The decorrelated variants apply the accumulator update
// after the step, so the current gradient never enters its own denominator;
// that ordering is the whole observable difference between them and adagrad.
OptimizerState step_decorrelated_adagrad_norm(OptimizerState s, const Vec& g, double eta,
                                              double gamma);
OptimizerState step_adagrad(OptimizerState s, const Vec& g, double eta, double gamma);
OptimizerState step_decorrelated_adagrad(OptimizerState s, const Vec& g, double eta,
                                         double gamma);
OptimizerState step_single_step_sgd(OptimizerState s, const Vec& g, const StepSizeFn& alpha);

OptimizerState apply_step(const OptimizerConfig& cfg, OptimizerState s, const Vec& g);

enum class TrajStatus { completed, diverged_numeric };

// One record per visited iterate x_t (before the step taken at t).
struct StepView {
  long t;
  const Vec& x;
  double grad_norm;    // analytic |grad f(x_t)|
  const Vec& g_stoch;  // oracle draw used for the step
  double step_ratio;   // |x_{t+1} - x_t| / max(|g|, tiny)
  double accum;        // denominator sum before the step (0 for single_step)
};

// Drives T steps, invoking observer at each; observer returning false stops
// the scan. Non-finite iterates/accumulators stop with diverged_numeric (a
// successful demonstration outcome for the divergence experiments).
TrajStatus trajectory_scan(const ProblemInstance& inst, const OptimizerConfig& cfg, long T,
                           std::uint64_t seed, const std::function<bool(const StepView&)>& observer,
                           long* steps_done = nullptr);

struct TrajectoryStep {
  long t = 0;
  double x_norm = 0.0;
  std::array<double, 8> x_lead{};
  double grad_norm = 0.0;
  double g_norm = 0.0;
  std::array<double, 8> g_lead{};
  double step_size = 0.0;
  double accum = 0.0;
};

struct TrajectoryLog {
  std::vector<TrajectoryStep> steps;
  std::vector<Vec> full_x;  // filled when record_full
  int n_lead = 0;
  TrajStatus status = TrajStatus::completed;
  std::uint64_t seed = 0;
};

TrajectoryLog run_trajectory(const ProblemInstance& inst, const OptimizerConfig& cfg, long T,
                             std::uint64_t seed, bool record_full = false);

// header_lines are emitted verbatim, one "# " prefix each; pass the manifest
// echo there. t_eps >= 0 writes a footer, -1 omits it, -2 writes NOT_REACHED.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log,
                          const std::vector<std::string>& header_lines, long t_eps = -1);
void write_trajectory_jsonl(std::ostream& out, const TrajectoryLog& log,
                            const std::vector<std::string>& header_lines);

}  // namespace rsmooth
