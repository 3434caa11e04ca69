#include <doctest.h>

#include <cmath>

#include "rsmooth/chain.hpp"

using namespace rsmooth;

namespace {

ProblemParams unit_params() {
  ProblemParams p;
  p.Delta = 1.0;
  p.L0 = 1.0;
  p.L1 = 1.0;
  return p;
}

}  // namespace

TEST_CASE("schedule heads match closed forms") {
  ProblemParams p = unit_params();
  ChainSchedule s = chain_schedule(p, 1.0, 0.01, 16);

  // g_0 = Delta L1
  CHECK(s.g_d[0] == doctest::Approx(1.0).epsilon(1e-15));
  // g_1 = 576 * 2 * log(3): computed independently
  CHECK(s.g_d[1] == doctest::Approx(1152.0 * std::log(3.0)).epsilon(1e-13));
  // ell_0 = eta g_0 / gamma (empty sum in the denominator)
  CHECK(s.ell_d[0] == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(s.d_d[0] == 0.0);
  CHECK(s.d_d[1] == doctest::Approx(100.0).epsilon(1e-12));

  // m_t = log(1 + g_t) at unit parameters
  CHECK(s.m_d[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(s.m_d[1] == doctest::Approx(std::log1p(1152.0 * std::log(3.0))).epsilon(1e-12));

  // monotone g, monotone d
  for (long t = 0; t + 1 <= s.t_max; ++t) {
    CHECK(xs_compare(s.g[static_cast<std::size_t>(t)], s.g[static_cast<std::size_t>(t) + 1]) < 0);
    CHECK(xs_compare(s.d[static_cast<std::size_t>(t)], s.d[static_cast<std::size_t>(t) + 1]) < 0);
  }
}

TEST_CASE("schedule preconditions") {
  ProblemParams p = unit_params();
  CHECK_THROWS_AS(chain_schedule(p, 0.5, 0.01, 4), std::domain_error);  // eta < 1/L1
  CHECK_THROWS_AS(chain_schedule(p, 1.0, 1.0, 4), std::domain_error);   // gamma too large
  ProblemParams weak = p;
  weak.L0 = 2.0;  // Delta L1^2 < L0
  CHECK_THROWS_AS(chain_schedule(weak, 1.0, 0.01, 4), std::domain_error);
}

TEST_CASE("jump feasibility holds out to 1e4 at the largest gamma") {
  ProblemParams p = unit_params();
  double gmax = chain_gamma_max(p, 1.0);
  ChainSchedule s = chain_schedule(p, 1.0, gmax, 10000);  // construction asserts ell_t >= 4 m_{t+1}
  CHECK(s.t_max == 10000);
  // spot check the margin at the far end
  auto four_m = xs_mul(ExtendedScalar::from_double(4.0), s.m[10000]);
  CHECK(xs_compare(s.ell[9999], four_m) >= 0);
}

TEST_CASE("objective is C0/C1 across knots and anchored at the origin") {
  ProblemParams p = unit_params();
  ChainSchedule built = chain_schedule(p, 1.0, 0.01, 16);
  auto sched = std::make_shared<const ChainSchedule>(std::move(built));
  ProblemInstance inst = chain_objective(sched);

  // f'(d_0) = -g_0 = -Delta L1
  CHECK(inst.grad_at({0.0})[0] == doctest::Approx(-1.0).epsilon(1e-12));

  // gap at x0 = 0: psi(m_0) <= Delta
  double gap = inst.value(inst.x0) - inst.analytic_inf;
  CHECK(gap == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
  CHECK(gap <= p.Delta);

  for (long t = 1; t <= 4; ++t) {
    double d = sched->d_d[static_cast<std::size_t>(t)];
    const double h = 1e-9;
    double fl = inst.value({d - h}), fr = inst.value({d + h});
    CHECK(fr == doctest::Approx(fl).epsilon(1e-9));  // value continuity
    // slope continuity: both one-sided limits equal -g_t
    double gl = inst.grad_at({d - h})[0], gr = inst.grad_at({d + h})[0];
    CHECK(gl == doctest::Approx(gr).epsilon(1e-6));
    CHECK(gr == doctest::Approx(-sched->g_d[static_cast<std::size_t>(t)]).epsilon(1e-6));
  }
}

TEST_CASE("knot interface reaches arbitrary t") {
  ProblemParams p = unit_params();
  ChainSchedule s = chain_schedule(p, 1.0, 0.01, 2000);
  ChainKnot k = chain_knot(s, 2000);
  CHECK(k.slope.sign == -1);
  CHECK(k.slope.logmag == s.g[2000].logmag);
  CHECK(k.position.sign == 1);
  CHECK_THROWS_AS(chain_knot(s, 2001), std::range_error);
}

TEST_CASE("plain evaluation past the prefix raises a range error") {
  ProblemParams p = unit_params();
  ChainSchedule built = chain_schedule(p, 1.0, 0.01, 80);
  long prefix = built.prefix;
  CHECK(prefix >= 10);
  auto sched = std::make_shared<const ChainSchedule>(std::move(built));
  ProblemInstance inst = chain_objective(sched);
  double beyond = sched->d_d[static_cast<std::size_t>(prefix + 1)] * 1.01;
  CHECK_THROWS_AS(inst.value({beyond}), std::range_error);
}
