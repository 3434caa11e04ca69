#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsmooth {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);  // squared euclidean norm
double norm(const Vec& a);
double linf(const Vec& a);
void axpy(double a, const Vec& x, Vec& y);  // y += a*x
bool all_finite(const Vec& a);

// Sign plus natural-log magnitude. Survives sequences that grow like t^t,
// far past double range. sign == 0 means exact zero; logmag is then unused.
struct ExtendedScalar {
  int sign = 0;
  double logmag = 0.0;

  static ExtendedScalar zero() { return {0, 0.0}; }
  static ExtendedScalar from_double(double v);
  static ExtendedScalar from_log(int sign, double logmag);
  // Overflows to +-inf / underflows to 0 outside double range.
  double to_double() const;
  bool is_zero() const { return sign == 0; }
};

ExtendedScalar xs_mul(const ExtendedScalar& a, const ExtendedScalar& b);
// Throws std::domain_error when b is zero.
ExtendedScalar xs_div(const ExtendedScalar& a, const ExtendedScalar& b);
ExtendedScalar xs_pow_int(const ExtendedScalar& a, long n);
ExtendedScalar xs_sqrt(const ExtendedScalar& a);  // requires sign >= 0
// Log-sum-exp addition. Opposite signs are rejected (std::invalid_argument):
// no construction here ever needs cancellation, so it is an error, not an
// approximation.
ExtendedScalar xs_add_same_sign(const ExtendedScalar& a, const ExtendedScalar& b);
// Total order: -1, 0, +1.
int xs_compare(const ExtendedScalar& a, const ExtendedScalar& b);
inline bool xs_less(const ExtendedScalar& a, const ExtendedScalar& b) {
  return xs_compare(a, b) < 0;
}
std::string xs_format(const ExtendedScalar& a);  // "+exp(123.456)" style

// log(1 + e^u), stable for large |u|.
double log1p_exp(double u);

// Deterministic counter-based stream: draw i is a pure function of
// (seed, counter+i), so replay and parallel splitting are exact.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  bool bernoulli(double p) { return uniform() < p; }
  double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Disjoint block of 2^40 draws per child; safe to hand to parallel tasks.
  RandomStream split(std::uint64_t k) const {
    return RandomStream{seed, counter + ((k + 1) << 40)};
  }
};

struct FiniteDiffProbeError : std::runtime_error {
  int coordinate;
  explicit FiniteDiffProbeError(int coord)
      : std::runtime_error("finite_diff_gradient: non-finite evaluation while probing coordinate " +
                           std::to_string(coord)),
        coordinate(coord) {}
};

// 1e-5 * max(1, |x|_inf): balances truncation vs rounding for exp-scale objectives.
double fd_default_step(const Vec& x);
double finite_diff_partial(const std::function<double(const Vec&)>& f, const Vec& x, int j,
                           double h);
Vec finite_diff_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h);

}  // namespace rsmooth
