#include "rsmooth/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace rsmooth {

Vec draw_coordinate_rademacher(const Vec& grad, double sigma, int j, RandomStream& stream) {
  double u = stream.uniform();
  Vec out = grad;
  if (j >= 0) {
    double s = u < 0.5 ? -1.0 : 1.0;
    out[static_cast<std::size_t>(j)] += s * sigma;
  }
  return out;
}

Vec draw_scaling_dropout(const Vec& grad, double scale, RandomStream& stream) {
  if (!(scale >= 1.0)) throw std::domain_error("draw_scaling_dropout: scale must be >= 1");
  double u = stream.uniform();
  if (u < 1.0 / scale) {
    Vec out = grad;
    for (double& v : out) v *= scale;
    return out;
  }
  return Vec(grad.size(), 0.0);
}

Vec draw_two_point(const Vec& g1, const Vec& g2, double p, int region_sign,
                   RandomStream& stream) {
  if (!(p > 0.5 && p < 1.0)) throw std::domain_error("draw_two_point: p must lie in (1/2, 1)");
  double u = stream.uniform();
  const Vec& pick = (u < p) ? g1 : g2;
  Vec out = pick;
  for (double& v : out) v *= region_sign;
  return out;
}

}  // namespace rsmooth
