#include "rsmooth/numerics.hpp"

#include <algorithm>
#include <cstdio>

namespace rsmooth {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return dot(a, a); }

double norm(const Vec& a) { return std::sqrt(norm2(a)); }

double linf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

ExtendedScalar ExtendedScalar::from_double(double v) {
  if (v == 0.0) return zero();
  if (!std::isfinite(v)) throw std::domain_error("ExtendedScalar::from_double: non-finite value");
  return {v > 0 ? 1 : -1, std::log(std::abs(v))};
}

ExtendedScalar ExtendedScalar::from_log(int sign, double logmag) {
  if (sign == 0) return zero();
  if (sign != 1 && sign != -1) throw std::domain_error("ExtendedScalar::from_log: bad sign");
  return {sign, logmag};
}

double ExtendedScalar::to_double() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(logmag);
}

ExtendedScalar xs_mul(const ExtendedScalar& a, const ExtendedScalar& b) {
  if (a.sign == 0 || b.sign == 0) return ExtendedScalar::zero();
  return {a.sign * b.sign, a.logmag + b.logmag};
}

ExtendedScalar xs_div(const ExtendedScalar& a, const ExtendedScalar& b) {
  if (b.sign == 0) throw std::domain_error("xs_div: division by zero-sign operand");
  if (a.sign == 0) return ExtendedScalar::zero();
  return {a.sign * b.sign, a.logmag - b.logmag};
}

ExtendedScalar xs_pow_int(const ExtendedScalar& a, long n) {
  if (n == 0) return ExtendedScalar::from_double(1.0);
  if (a.sign == 0) {
    if (n < 0) throw std::domain_error("xs_pow_int: zero base with negative exponent");
    return ExtendedScalar::zero();
  }
  int sign = (n % 2 == 0) ? 1 : a.sign;
  return {sign, a.logmag * static_cast<double>(n)};
}

ExtendedScalar xs_sqrt(const ExtendedScalar& a) {
  if (a.sign < 0) throw std::domain_error("xs_sqrt: negative operand");
  if (a.sign == 0) return ExtendedScalar::zero();
  return {1, a.logmag * 0.5};
}

ExtendedScalar xs_add_same_sign(const ExtendedScalar& a, const ExtendedScalar& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.sign != b.sign)
    throw std::invalid_argument("xs_add_same_sign: opposite-sign addition is unsupported");
  double hi = std::max(a.logmag, b.logmag);
  double lo = std::min(a.logmag, b.logmag);
  return {a.sign, hi + std::log1p(std::exp(lo - hi))};
}

int xs_compare(const ExtendedScalar& a, const ExtendedScalar& b) {
  if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
  if (a.sign == 0) return 0;
  if (a.logmag == b.logmag) return 0;
  bool mag_less = a.logmag < b.logmag;
  if (a.sign > 0) return mag_less ? -1 : 1;
  return mag_less ? 1 : -1;
}

std::string xs_format(const ExtendedScalar& a) {
  if (a.sign == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%cexp(%.17g)", a.sign > 0 ? '+' : '-', a.logmag);
  return buf;
}

double log1p_exp(double u) {
  if (u > 36.0) return u + std::exp(-u);  // log1p(e^u) = u + log1p(e^-u)
  return std::log1p(std::exp(u));
}

std::uint64_t RandomStream::next_u64() {
  // Stateless SplitMix64 evaluated at index `counter` of the stream `seed`.
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  ++counter;
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double fd_default_step(const Vec& x) { return 1e-5 * std::max(1.0, linf(x)); }

double finite_diff_partial(const std::function<double(const Vec&)>& f, const Vec& x, int j,
                           double h) {
  Vec p = x;
  p[j] = x[j] + h;
  double fp = f(p);
  p[j] = x[j] - h;
  double fm = f(p);
  if (!std::isfinite(fp) || !std::isfinite(fm)) throw FiniteDiffProbeError(j);
  return (fp - fm) / (2.0 * h);
}

Vec finite_diff_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  if (!(h > 0.0)) throw std::domain_error("finite_diff_gradient: h must be positive");
  Vec g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    g[j] = finite_diff_partial(f, x, static_cast<int>(j), h);
  return g;
}

}  // namespace rsmooth
