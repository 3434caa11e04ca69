#pragma once

#include <string>

#include "rsmooth/instances.hpp"
#include "rsmooth/parallel.hpp"

namespace rsmooth {

struct CertifyTolerances {
  double smooth = 1e-6;    // ratio <= 1 + smooth
  double fd = 1e-5;        // |g_fd - g| / max(1, |g|) <= fd
  double gap_rel = 1e-9;   // gap <= Delta (1 + gap_rel)
  double noise_rel = 1e-9; // per-draw bound slack
};

struct CertificateReport {
  bool passed = false;
  // (a) gradient-difference ratio against the affine bound, larger endpoint
  //     gradient norm in the denominator
  double smooth_ratio_max = 0.0;
  bool smooth_ok = false;
  // (b) analytic vs central-difference gradient
  double fd_max_rel_err = 0.0;
  bool fd_ok = false;
  // (c) initial gap: closed form, or the trajectory surrogate for the
  //     unbounded-slope constructions
  double gap_value = 0.0;
  double gap_allowed = 0.0;
  bool gap_ok = false;
  // (d) per-draw noise bound
  double noise_max_excess = 0.0;
  bool noise_ok = false;
  std::string witness;  // first failing check, with the sample point
  long n_samples = 0;
};

CertificateReport certify_membership(const ProblemInstance& inst, long n_samples,
                                     RandomStream stream, ExecMode mode = ExecMode::parallel,
                                     const CertifyTolerances& tol = {});

}  // namespace rsmooth
