#pragma once

#include <memory>
#include <vector>

#include "rsmooth/instances.hpp"
#include "rsmooth/numerics.hpp"

namespace rsmooth {

// Sequences driving the piecewise linear/exponential divergence objective:
// gradient magnitudes g_t ~ t^t, valley half-widths m_t, jump lengths ell_t
// and knot positions d_t. Everything is carried in log-domain scalars for
// arbitrary t, with a plain-double mirror valid on [0, prefix].
struct ChainSchedule {
  ProblemParams params;
  double eta = 1.0;
  double gamma = 1.0;
  double growth_c = 576.0;
  long t_max = 0;

  // Sized t_max + 2 so that m_{t+1} and g_{t+1} exist for every t <= t_max.
  std::vector<ExtendedScalar> g, m, ell, d;

  // Plain-double mirror (entries beyond the representable range are inf/nan).
  std::vector<double> g_d, m_d, ell_d, d_d;
  std::vector<double> f_knot_d;  // objective offset of piece t (riser gains below knot t)
  std::vector<double> gsq_d;     // gamma^2 + sum_{i<t} g_i^2
  long prefix = 0;               // largest t with every double above finite through t+1
};

// Largest admissible stabilization constant for the divergence construction.
double chain_gamma_max(const ProblemParams& params, double eta);

// Builds the schedule and asserts ell_t >= 4 m_{t+1} for every t <= t_max.
ChainSchedule chain_schedule(const ProblemParams& params, double eta, double gamma, long t_max,
                             double growth_c = 576.0);

struct ChainKnot {
  ExtendedScalar position;  // d_t
  ExtendedScalar slope;     // f'(d_t) = -g_t
};

// Knot-restricted evaluation, valid for every t <= t_max.
ChainKnot chain_knot(const ChainSchedule& s, long t);

// Plain-real objective on the representable prefix; throws std::range_error
// beyond it. One-dimensional, deterministic oracle.
ProblemInstance chain_objective(std::shared_ptr<const ChainSchedule> schedule);

}  // namespace rsmooth
