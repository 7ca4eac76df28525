#pragma once

#include "anisofrac/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace anisofrac::detail {

inline int direction_count(int level) { return 16 * (level + 1); }

/// Integrates a paired ray integrand over R^n.
///
/// g(dir, t) must return the sum of the integrand at x + t dir and x - t dir,
/// multiplied by the polar Jacobian t^(n-1). In 1-D the single direction +1
/// covers the line; in 2-D directions sweep the half circle [0, pi) with the
/// periodic trapezoidal rule.
template <typename V, typename G, typename P>
LevelValue<V> rays_at_level(int n, G&& g, P&& problem_for, const QuadratureBudget& budget, int level,
                            const V& zero) {
  if (n == 1) {
    Point dir(1);
    dir << 1.0;
    const NodeSet set = radial_nodes(problem_for(dir), budget, level);
    return apply_nodes<V>(set, [&](double t) { return g(dir, t); }, zero);
  }
  const int count = direction_count(level);
  const double w = std::numbers::pi / count;
  LevelValue<V> out{zero, 0.0};
  for (int k = 0; k < count; ++k) {
    const double theta = std::numbers::pi * k / count;
    Point dir(2);
    dir << std::cos(theta), std::sin(theta);
    const NodeSet set = radial_nodes(problem_for(dir), budget, level);
    const LevelValue<V> part = apply_nodes<V>(set, [&](double t) { return g(dir, t); }, zero);
    out.value += w * part.value;
    out.scale += w * part.scale;
  }
  return out;
}

template <typename V, typename G, typename P>
Estimate<V> integrate_rays(int n, G&& g, P&& problem_for, const QuadratureBudget& budget, const V& zero,
                           const std::string& what) {
  return refine<V>([&](int level) { return rays_at_level<V>(n, g, problem_for, budget, level, zero); }, budget,
                   what);
}

}  // namespace anisofrac::detail
