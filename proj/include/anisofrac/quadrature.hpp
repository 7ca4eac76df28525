#pragma once

#include "anisofrac/core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace anisofrac {

/// Nodes and weights on the reference interval [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points. Cached; the returned reference stays valid.
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1], a, b > -1.
const QuadratureRule& gauss_jacobi(int n, double a, double b);

struct QuadratureBudget {
  int panels_per_annulus = 2;
  int refinement_levels = 4;
  double tolerance = 1e-8;
  int base_order = 8;

  void validate() const;
  int gauss_order(int level) const { return base_order + 2 * level; }
  int panels_per_octave(int level) const { return panels_per_annulus * (level + 1); }
};

/// Point in (0, cutoff) where the radial integrand loses smoothness.
/// Graded breakpoints get dyadic panels shrinking toward them (root or
/// power-type behaviour); plain ones only become panel boundaries.
struct Breakpoint {
  double t;
  bool graded;
};

/// Description of a one-sided radial integral over t in (0, infinity).
///
/// Near t = 0 the integrand behaves like t^(-singular_exponent) times a smooth
/// function and is integrated with a Gauss-Jacobi rule on [0, ball_radius].
/// Beyond `cutoff` it is either zero (tail_exponent == 0) or follows a power law
/// t^(-tail_exponent), tail_exponent > 1, whose remainder is added analytically.
struct RadialProblem {
  double ball_radius = 0.0;
  double singular_exponent = 0.0;
  std::vector<Breakpoint> breakpoints;
  double cutoff = 0.0;
  double tail_exponent = 0.0;
};

/// Flattened quadrature: sum_k weights[k] * g(nodes[k]) approximates the radial integral.
struct NodeSet {
  std::vector<double> nodes;
  std::vector<double> weights;

  void add_panel(double a, double b, const QuadratureRule& rule);
  void add(double t, double w) {
    nodes.push_back(t);
    weights.push_back(w);
  }
  std::size_t size() const { return nodes.size(); }
};

NodeSet radial_nodes(const RadialProblem& problem, const QuadratureBudget& budget, int level);

/// Tensor Gauss-Legendre nodes on [a, b] split into equal panels.
NodeSet composite_gauss(double a, double b, int panels, int order);

inline double magnitude(double v) { return std::abs(v); }

template <typename Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.norm();
}

/// A quadrature value with its refinement error estimate.
template <typename V>
struct Estimate {
  V value;
  double error = 0.0;
  int level = 0;
};

/// Result of one quadrature level: the value and the sum of absolute contributions,
/// which serves as the scale for the relative stopping test.
template <typename V>
struct LevelValue {
  V value;
  double scale = 0.0;
};

std::string format_change(double change);

/// Runs levels 0..budget.refinement_levels until two successive levels agree to
/// budget.tolerance relative to the larger of |value| and the absolute scale.
template <typename V, typename EvalLevel>
Estimate<V> refine(EvalLevel&& eval_level, const QuadratureBudget& budget, const std::string& what) {
  LevelValue<V> previous = eval_level(0);
  double last_change = 0.0;
  for (int level = 1; level <= budget.refinement_levels; ++level) {
    LevelValue<V> current = eval_level(level);
    const double change = magnitude(current.value - previous.value);
    const double reference = std::max(magnitude(current.value), current.scale);
    last_change = change;
    if (change <= budget.tolerance * reference || reference == 0.0) {
      return Estimate<V>{current.value, change, level};
    }
    previous = current;
  }
  throw ConvergenceError(what + ": successive refinements differ by " + format_change(last_change) +
                         " after " + std::to_string(budget.refinement_levels) + " levels");
}

/// Applies a NodeSet to an integrand returning double or an Eigen vector.
template <typename V, typename G>
LevelValue<V> apply_nodes(const NodeSet& set, G&& g, const V& zero) {
  LevelValue<V> out{zero, 0.0};
  for (std::size_t k = 0; k < set.size(); ++k) {
    const V gk = g(set.nodes[k]);
    out.value += set.weights[k] * gk;
    out.scale += std::abs(set.weights[k]) * magnitude(gk);
  }
  return out;
}

/// Adaptive radial integral of g over (0, infinity).
template <typename V, typename G>
Estimate<V> integrate_radial(G&& g, const RadialProblem& problem, const QuadratureBudget& budget,
                             const V& zero, const std::string& what) {
  return refine<V>(
      [&](int level) { return apply_nodes<V>(radial_nodes(problem, budget, level), g, zero); }, budget,
      what);
}

}  // namespace anisofrac
