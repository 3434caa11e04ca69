#pragma once

#include <cmath>
#include <stdexcept>

namespace rsmooth {

// psi(x) = (L0/L1^2) (exp(L1|x|) - L1|x| - 1): the steepest profile allowed
// when the curvature bound is affine in the gradient magnitude, i.e.
// |psi''| = L0 + L1 |psi'| everywhere.
struct PsiEval {
  double value;
  double first;
  double second;
};

inline double psi_value_raw(double x, double L0, double L1) {
  double u = L1 * std::abs(x);
  return (L0 / (L1 * L1)) * (std::expm1(u) - u);
}

inline double psi_prime_raw(double x, double L0, double L1) {
  double u = L1 * std::abs(x);
  double d = (L0 / L1) * std::expm1(u);
  return x < 0 ? -d : (x > 0 ? d : 0.0);
}

inline double psi_second_raw(double x, double L0, double L1) {
  return L0 * std::exp(L1 * std::abs(x));
}

inline PsiEval psi_eval(double x, double L0, double L1) {
  if (!(L0 > 0.0) || !(L1 > 0.0)) throw std::domain_error("psi_eval: L0, L1 must be positive");
  if (std::abs(x) > 700.0 / L1)
    throw std::range_error(
        "psi_eval: |x| exceeds 700/L1; plain doubles overflow, use the log-domain path");
  return {psi_value_raw(x, L0, L1), psi_prime_raw(x, L0, L1), psi_second_raw(x, L0, L1)};
}

// (psi')^{-1}(y) = log(1 + L1 y / L0) / L1 for y >= 0.
inline double psi_prime_inverse(double y, double L0, double L1) {
  return std::log1p(L1 * y / L0) / L1;
}

}  // namespace rsmooth
