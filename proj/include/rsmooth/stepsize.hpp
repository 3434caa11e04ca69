#pragma once

#include <stdexcept>
#include <vector>

#include "rsmooth/numerics.hpp"

namespace rsmooth {

// Step-size function alpha(g) for single-step SGD. All rules here depend on
// g only through its norm, which keeps them total and makes table rules
// trivially serializable.
struct StepSizeFn {
  enum class Rule { constant, clip, normalized, negative, table };

  Rule rule = Rule::constant;
  double eta = 1.0;  // constant value; clip cap
  double c = 1.0;    // clip radius, normalized step length, negative magnitude
  std::vector<double> table_norms;   // ascending breakpoints on |g|
  std::vector<double> table_alphas;  // table_norms.size() + 1 values, ends extended

  double at_norm(double gnorm) const {
    switch (rule) {
      case Rule::constant:
        return eta;
      case Rule::clip:
        return gnorm > 0.0 ? std::min(eta, c / gnorm) : eta;
      case Rule::normalized:
        if (!(gnorm > 0.0)) throw std::domain_error("normalized step size undefined at g = 0");
        return c / gnorm;
      case Rule::negative:
        return -c;
      case Rule::table: {
        std::size_t i = 0;
        while (i < table_norms.size() && gnorm >= table_norms[i]) ++i;
        return table_alphas[i];
      }
    }
    throw std::logic_error("StepSizeFn: bad rule");
  }

  double operator()(const Vec& g) const { return at_norm(norm(g)); }

  static StepSizeFn constant_rule(double eta) { return {Rule::constant, eta, 0.0, {}, {}}; }
  static StepSizeFn clip_rule(double eta, double c) { return {Rule::clip, eta, c, {}, {}}; }
  static StepSizeFn normalized_rule(double c) { return {Rule::normalized, 0.0, c, {}, {}}; }
  static StepSizeFn negative_rule(double c) { return {Rule::negative, 0.0, c, {}, {}}; }
  static StepSizeFn table_rule(std::vector<double> norms, std::vector<double> alphas) {
    if (alphas.size() != norms.size() + 1)
      throw std::invalid_argument("table rule needs exactly one more value than breakpoints");
    for (std::size_t i = 1; i < norms.size(); ++i)
      if (!(norms[i] > norms[i - 1]))
        throw std::invalid_argument("table rule breakpoints must be strictly increasing");
    return {Rule::table, 0.0, 0.0, std::move(norms), std::move(alphas)};
  }
};

}  // namespace rsmooth
