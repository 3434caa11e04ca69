#include "rsmooth/optimizers.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace rsmooth {

std::string optimizer_name(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::decorrelated_adagrad_norm: return "dan";
    case OptimizerKind::adagrad: return "adagrad";
    case OptimizerKind::decorrelated_adagrad: return "dadagrad";
    case OptimizerKind::single_step: return "sgd";
  }
  throw std::logic_error("optimizer_name: bad kind");
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "dan") return OptimizerKind::decorrelated_adagrad_norm;
  if (name == "adagrad") return OptimizerKind::adagrad;
  if (name == "dadagrad") return OptimizerKind::decorrelated_adagrad;
  if (name == "sgd") return OptimizerKind::single_step;
  throw std::invalid_argument("unknown optimizer '" + name +
                              "' (expected dan|adagrad|dadagrad|sgd)");
}

OptimizerState make_state(const Vec& x0, OptimizerKind kind) {
  OptimizerState s;
  s.x = x0;
  if (kind == OptimizerKind::adagrad || kind == OptimizerKind::decorrelated_adagrad)
    s.coord_sums.assign(x0.size(), 0.0);
  return s;
}

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("optimizer: gamma > 0 required");
}

}  // namespace

OptimizerState step_decorrelated_adagrad_norm(OptimizerState s, const Vec& g, double eta,
                                              double gamma) {
  check_gamma(gamma);
  double rate = eta / std::sqrt(gamma * gamma + s.scalar_sum);
  axpy(-rate, g, s.x);
  s.scalar_sum += norm2(g);  // after the step: g_t stays out of its own denominator
  ++s.t;
  return s;
}

OptimizerState step_adagrad(OptimizerState s, const Vec& g, double eta, double gamma) {
  check_gamma(gamma);
  for (std::size_t j = 0; j < g.size(); ++j) {
    double gj2 = g[j] * g[j];
    s.x[j] -= eta / std::sqrt(gamma * gamma + s.coord_sums[j] + gj2) * g[j];
    s.coord_sums[j] += gj2;
  }
  ++s.t;
  return s;
}

OptimizerState step_decorrelated_adagrad(OptimizerState s, const Vec& g, double eta,
                                         double gamma) {
  check_gamma(gamma);
  for (std::size_t j = 0; j < g.size(); ++j) {
    s.x[j] -= eta / std::sqrt(gamma * gamma + s.coord_sums[j]) * g[j];
    s.coord_sums[j] += g[j] * g[j];
  }
  ++s.t;
  return s;
}

OptimizerState step_single_step_sgd(OptimizerState s, const Vec& g, const StepSizeFn& alpha) {
  // a zero draw moves nothing whatever the rule; alpha need not be defined there
  if (norm2(g) != 0.0) axpy(-alpha(g), g, s.x);
  ++s.t;
  return s;
}

OptimizerState apply_step(const OptimizerConfig& cfg, OptimizerState s, const Vec& g) {
  switch (cfg.kind) {
    case OptimizerKind::decorrelated_adagrad_norm:
      return step_decorrelated_adagrad_norm(std::move(s), g, cfg.eta, cfg.gamma);
    case OptimizerKind::adagrad:
      return step_adagrad(std::move(s), g, cfg.eta, cfg.gamma);
    case OptimizerKind::decorrelated_adagrad:
      return step_decorrelated_adagrad(std::move(s), g, cfg.eta, cfg.gamma);
    case OptimizerKind::single_step:
      return step_single_step_sgd(std::move(s), g, cfg.alpha);
  }
  throw std::logic_error("apply_step: bad kind");
}

namespace {

double accum_snapshot(const OptimizerState& s, OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::decorrelated_adagrad_norm:
      return s.scalar_sum;
    case OptimizerKind::adagrad:
    case OptimizerKind::decorrelated_adagrad: {
      double t = 0.0;
      for (double v : s.coord_sums) t += v;
      return t;
    }
    case OptimizerKind::single_step:
      return 0.0;
  }
  return 0.0;
}

bool state_finite(const OptimizerState& s) {
  if (!all_finite(s.x)) return false;
  if (!std::isfinite(s.scalar_sum)) return false;
  return s.coord_sums.empty() || all_finite(s.coord_sums);
}

}  // namespace

TrajStatus trajectory_scan(const ProblemInstance& inst, const OptimizerConfig& cfg, long T,
                           std::uint64_t seed, const std::function<bool(const StepView&)>& observer,
                           long* steps_done) {
  if (T < 1) throw std::domain_error("trajectory: T >= 1 required");
  RandomStream stream{seed, 0};
  OptimizerState state = make_state(inst.x0, cfg.kind);
  Vec gtrue(static_cast<std::size_t>(inst.dim));
  long done = 0;
  TrajStatus status = TrajStatus::completed;

  for (long t = 0; t < T; ++t) {
    double gnorm;
    Vec gdraw;
    try {
      inst.gradient(state.x, gtrue);
      gnorm = norm(gtrue);
      if (!std::isfinite(gnorm)) throw std::range_error("non-finite gradient");
      gdraw = oracle_draw(inst, state.x, gtrue, stream);
    } catch (const std::range_error&) {
      status = TrajStatus::diverged_numeric;
      break;
    }

    OptimizerState next = apply_step(cfg, state, gdraw);

    double dn = 0.0;
    for (std::size_t j = 0; j < next.x.size(); ++j) {
      double dx = next.x[j] - state.x[j];
      dn += dx * dx;
    }
    double gd_norm = norm(gdraw);
    StepView view{t, state.x, gnorm, gdraw,
                  std::sqrt(dn) / std::max(gd_norm, 1e-300), accum_snapshot(state, cfg.kind)};
    ++done;
    if (!observer(view)) {
      state = std::move(next);
      break;
    }
    if (!state_finite(next)) {
      status = TrajStatus::diverged_numeric;
      break;
    }
    state = std::move(next);
  }
  if (steps_done) *steps_done = done;
  return status;
}

TrajectoryLog run_trajectory(const ProblemInstance& inst, const OptimizerConfig& cfg, long T,
                             std::uint64_t seed, bool record_full) {
  TrajectoryLog log;
  log.seed = seed;
  log.n_lead = std::min(inst.dim, 8);
  log.steps.reserve(static_cast<std::size_t>(std::min<long>(T, 1 << 20)));

  auto observer = [&](const StepView& v) {
    TrajectoryStep s;
    s.t = v.t;
    s.x_norm = norm(v.x);
    s.grad_norm = v.grad_norm;
    s.g_norm = norm(v.g_stoch);
    for (int j = 0; j < log.n_lead; ++j) {
      s.x_lead[static_cast<std::size_t>(j)] = v.x[static_cast<std::size_t>(j)];
      s.g_lead[static_cast<std::size_t>(j)] = v.g_stoch[static_cast<std::size_t>(j)];
    }
    s.step_size = v.step_ratio;
    s.accum = v.accum;
    log.steps.push_back(s);
    if (record_full) log.full_x.push_back(v.x);
    return true;
  };
  log.status = trajectory_scan(inst, cfg, T, seed, observer);
  return log;
}

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log,
                          const std::vector<std::string>& header_lines, long t_eps) {
  for (const auto& line : header_lines) out << "# " << line << "\n";
  out << "t,x_norm";
  for (int j = 0; j < log.n_lead; ++j) out << ",x" << j;
  out << ",grad_norm,g_norm,step_size,accum\n";
  for (const auto& s : log.steps) {
    out << s.t << ',' << fmt_g(s.x_norm);
    for (int j = 0; j < log.n_lead; ++j) out << ',' << fmt_g(s.x_lead[static_cast<std::size_t>(j)]);
    out << ',' << fmt_g(s.grad_norm) << ',' << fmt_g(s.g_norm) << ',' << fmt_g(s.step_size) << ','
        << fmt_g(s.accum) << "\n";
  }
  if (log.status == TrajStatus::diverged_numeric) out << "# status = DIVERGED_NUMERIC\n";
  if (t_eps >= 0)
    out << "# t_eps = " << t_eps << "\n";
  else if (t_eps == -2)
    out << "# t_eps = NOT_REACHED\n";
}

void write_trajectory_jsonl(std::ostream& out, const TrajectoryLog& log,
                            const std::vector<std::string>& header_lines) {
  for (const auto& line : header_lines) {
    nlohmann::json meta;
    meta["meta"] = line;
    out << meta.dump() << "\n";
  }
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const auto& s = log.steps[i];
    nlohmann::json row;
    row["t"] = s.t;
    row["x_norm"] = s.x_norm;
    row["grad_norm"] = s.grad_norm;
    row["g_norm"] = s.g_norm;
    row["step_size"] = s.step_size;
    row["accum"] = s.accum;
    if (i < log.full_x.size()) row["x"] = log.full_x[i];
    out << row.dump() << "\n";
  }
  if (log.status == TrajStatus::diverged_numeric) {
    nlohmann::json meta;
    meta["meta"] = "status = DIVERGED_NUMERIC";
    out << meta.dump() << "\n";
  }
}

}  // namespace rsmooth
