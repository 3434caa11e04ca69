// Wall-clock comparison of the serial reference paths against the OpenMP
// kernels. Results must match bit for bit; this target reports the speedup.

#include <chrono>
#include <cstdio>

#include "rsmooth/analysis.hpp"
#include "rsmooth/certify.hpp"
#include "rsmooth/walk.hpp"

using namespace rsmooth;

namespace {

template <class F>
double time_ms(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-28s serial %9.1f ms   openmp %9.1f ms   speedup %.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  {
    WalkEstimate s{}, p{};
    double ts = time_ms([&] {
      s = walk_hit_probability(2.0 / 3.0, 2.0, 100000, 1000.0, 300000, 7, ExecMode::serial);
    });
    double tp = time_ms([&] {
      p = walk_hit_probability(2.0 / 3.0, 2.0, 100000, 1000.0, 300000, 7, ExecMode::parallel);
    });
    report("walk_hit_probability", ts, tp, s.z_hat == p.z_hat);
  }
  {
    ProblemParams params;
    params.sigma = 1.0;
    params.epsilon = 0.1;
    ProblemInstance inst = coordwise_exp_objective(params, 256);
    CertificateReport s{}, p{};
    double ts = time_ms(
        [&] { s = certify_membership(inst, 3000, RandomStream{11, 0}, ExecMode::serial); });
    double tp = time_ms(
        [&] { p = certify_membership(inst, 3000, RandomStream{11, 0}, ExecMode::parallel); });
    bool same = s.smooth_ratio_max == p.smooth_ratio_max && s.fd_max_rel_err == p.fd_max_rel_err &&
                s.noise_max_excess == p.noise_max_excess;
    report("certify_membership", ts, tp, same);
  }
  {
    ProblemParams params;
    params.Delta = 2.0;
    std::vector<double> values = {0.1, 0.05, 0.025, 0.0125};
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3};
    auto make_inst = [&](double eps) {
      ProblemParams p = params;
      p.epsilon = eps;
      return hinge_objective(p);
    };
    auto make_cfg = [&](double) {
      OptimizerConfig cfg;
      cfg.kind = OptimizerKind::decorrelated_adagrad;
      cfg.eta = 0.05;
      cfg.gamma = 1.0;
      return cfg;
    };
    auto eps_of = [](double eps) { return eps; };
    SweepResult s, p;
    double ts = time_ms([&] {
      s = run_sweep("eps", make_inst, make_cfg, eps_of, values, seeds, 100000000, ExecMode::serial);
    });
    double tp = time_ms([&] {
      p = run_sweep("eps", make_inst, make_cfg, eps_of, values, seeds, 100000000,
                    ExecMode::parallel);
    });
    bool same = s.rows.size() == p.rows.size();
    for (std::size_t i = 0; same && i < s.rows.size(); ++i)
      same = s.rows[i].t_eps == p.rows[i].t_eps;
    report("hinge eps sweep", ts, tp, same);
  }
  return 0;
}
