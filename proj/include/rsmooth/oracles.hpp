#pragma once

#include <functional>

#include "rsmooth/numerics.hpp"

namespace rsmooth {

enum class OracleKind { deterministic, coordinate_rademacher, scaling_dropout, two_point };

// Stochastic gradient g(x, xi). The draw functions are geometry-free: the
// zero-coordinate selector and the valley-region sign are computed by the
// instance and passed in. Every stochastic kind consumes exactly one uniform
// per step, so draw t is a pure function of (seed, t) and replays bit-exact.
struct OracleSpec {
  OracleKind kind = OracleKind::deterministic;
  double sigma = 0.0;  // coordinate_rademacher deviation
  double scale = 1.0;  // scaling_dropout: |g| / |g~| >= 1
  double p = 0.0;      // two_point: probability of the g1 branch
  Vec g1, g2;          // two_point outcomes (canonical direction)
};

// grad + (2 xi - 1) sigma e_j, xi ~ Bernoulli(1/2). j < 0 means the selector
// hit its fallback branch: no coordinate is injected (callers flag this).
Vec draw_coordinate_rademacher(const Vec& grad, double sigma, int j, RandomStream& stream);

// scale * grad with probability 1/scale, zero vector otherwise.
Vec draw_scaling_dropout(const Vec& grad, double scale, RandomStream& stream);

// region_sign * g1 with probability p, region_sign * g2 otherwise.
Vec draw_two_point(const Vec& g1, const Vec& g2, double p, int region_sign, RandomStream& stream);

}  // namespace rsmooth
