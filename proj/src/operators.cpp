#include "anisofrac/operators.hpp"

#include "rays.hpp"

#include <cmath>
#include <sstream>

namespace anisofrac {

namespace {

void require_dimension(int field_dim, int n, const char* who) {
  if (field_dim != n) throw DomainError(std::string(who) + ": field dimension does not match the kernel");
}

std::string at(const char* what, const Point& x) {
  std::ostringstream os;
  os << what << " at x = (" << x.transpose() << ")";
  return os.str();
}

bool is_compact(const SupportGeometry& g, double decay) { return g.compact() && decay == 0.0; }

bool is_empty(const SupportGeometry& g, double decay) { return is_compact(g, decay) && g.radius == 0.0; }

double far_cutoff(const SupportGeometry& g, const Point& x, double r_outer) {
  const double core = g.compact() ? g.exit_distance(x) : (x - g.center).norm() + 1.0;
  return r_outer * core;
}

/// Cutoff and tail for a paired integrand whose non-singular part decays like
/// t^{-base} times the field's own decay.
RadialProblem ray_problem(const SupportGeometry& g, double decay, const Point& x, const Point& dir,
                          double ball_radius, double singular_exponent, double r_outer, double compact_tail,
                          double base_tail) {
  RadialProblem p;
  p.ball_radius = ball_radius;
  p.singular_exponent = singular_exponent;
  p.breakpoints = g.ray_breakpoints(x, dir);
  if (is_compact(g, decay)) {
    // A margin past the exit distance keeps the outermost crossing an interior, graded breakpoint.
    p.cutoff = 1.25 * g.exit_distance(x);
    p.tail_exponent = compact_tail;
  } else {
    p.cutoff = far_cutoff(g, x, r_outer);
    p.tail_exponent = base_tail + decay;
  }
  return p;
}

SupportGeometry graded_copy(const SupportGeometry& g) {
  SupportGeometry out = g;
  out.singular_radii.insert(out.singular_radii.end(), g.kink_radii.begin(), g.kink_radii.end());
  out.kink_radii.clear();
  return out;
}

}  // namespace

UnweightedKernel fractional_kernel_pair(const KernelSpec& spec) {
  spec.validate();
  UnweightedKernel k;
  k.dimension = spec.n;
  k.order = spec.s;
  const double half_c = 0.5 * spec.c_ns;
  const double root_c = std::sqrt(half_c);
  const double p = spec.n + 2.0 * spec.s;
  k.alpha = [root_c, p](const Point& x, const Point& y) -> Point {
    const Point d = y - x;
    const double r = d.norm();
    if (r == 0.0) throw CoincidentPointsError("kernel alpha: x and y coincide");
    return (root_c * std::pow(r, -0.5 * p) / r) * d;
  };
  k.gamma = [half_c, p](const Point& x, const Point& y) {
    const double r = (y - x).norm();
    if (r == 0.0) throw CoincidentPointsError("kernel gamma: x and y coincide");
    return half_c * std::pow(r, -p);
  };
  k.id = "gamma-fl-" + spec.id();
  return k;
}

Point unweighted_gradient(const ScalarField& u, const Point& x, const Point& y) {
  return (u(y) - u(x)) * eval_alpha(x, y);
}

Point unweighted_gradient(const ScalarField& u, const UnweightedKernel& kernel, const Point& x, const Point& y) {
  if ((y - x).norm() == 0.0) throw CoincidentPointsError("unweighted_gradient: x and y coincide");
  return (u(y) - u(x)) * kernel.alpha(x, y);
}

TwoPointVectorField unweighted_gradient_field(const ScalarField& u, const UnweightedKernel& kernel) {
  require_dimension(u.dimension, kernel.dimension, "unweighted_gradient_field");
  TwoPointVectorField v;
  v.dimension = u.dimension;
  auto ue = u.eval;
  auto alpha = kernel.alpha;
  v.eval = [ue, alpha](const Point& x, const Point& y) -> Point { return (ue(y) - ue(x)) * alpha(x, y); };
  v.singular_exponent = 2.0 * kernel.order - 1.0;
  v.tail_exponent = 1.0 + 2.0 * kernel.order;
  v.geometry = u.geometry;
  v.id = "grad(" + u.id + ")";
  return v;
}

double unweighted_divergence(const TwoPointVectorField& v, const UnweightedKernel& kernel, const Point& x,
                             const QuadratureBudget& budget) {
  budget.validate();
  require_dimension(v.dimension, kernel.dimension, "unweighted_divergence");
  const int n = v.dimension;
  const bool finite_reach = std::isfinite(v.reach);
  if (!finite_reach && v.geometry.compact() && v.geometry.radius == 0.0) return 0.0;
  const double length = finite_reach ? v.reach : v.geometry.length_scale();
  constexpr double r_inner = 1e-3;
  constexpr double r_outer = 50.0;
  auto problem_for = [&](const Point& dir) {
    if (finite_reach) {
      RadialProblem p;
      p.ball_radius = r_inner * length;
      p.singular_exponent = v.singular_exponent;
      p.breakpoints = v.geometry.ray_breakpoints(x, dir);
      p.cutoff = v.reach;
      return p;
    }
    return ray_problem(v.geometry, 0.0, x, dir, r_inner * length, v.singular_exponent, r_outer, v.tail_exponent,
                       v.tail_exponent);
  };
  auto g = [&](const Point& dir, double t) {
    const Point yp = x + t * dir;
    const Point ym = x - t * dir;
    const double plus = (v.eval(x, yp) + v.eval(yp, x)).dot(kernel.alpha(x, yp));
    const double minus = (v.eval(x, ym) + v.eval(ym, x)).dot(kernel.alpha(x, ym));
    return (plus + minus) * std::pow(t, n - 1);
  };
  return detail::integrate_rays<double>(n, g, problem_for, budget, 0.0, at("unweighted_divergence", x)).value;
}

double unweighted_laplacian(const ScalarField& u, const UnweightedKernel& kernel, const Point& x,
                            const QuadratureBudget& budget) {
  budget.validate();
  require_dimension(u.dimension, kernel.dimension, "unweighted_laplacian");
  if (is_empty(u.geometry, u.decay_exponent)) return 0.0;
  const int n = u.dimension;
  const double ux = u(x);
  const double sigma = kernel.order;
  const double ball = laplacian_ball_fraction * u.geometry.length_scale();
  auto problem_for = [&](const Point& dir) {
    return ray_problem(u.geometry, u.decay_exponent, x, dir, ball, 2.0 * sigma - 1.0, 50.0, 1.0 + 2.0 * sigma,
                       1.0 + 2.0 * sigma);
  };
  auto g = [&](const Point& dir, double t) {
    const Point yp = x + t * dir;
    const Point ym = x - t * dir;
    return 2.0 * ((u(yp) - ux) * kernel.gamma(x, yp) + (u(ym) - ux) * kernel.gamma(x, ym)) * std::pow(t, n - 1);
  };
  return detail::integrate_rays<double>(n, g, problem_for, budget, 0.0, at("unweighted_laplacian", x)).value;
}

namespace {

// A non-negative fixed_level evaluates that single refinement level. Nested operators
// rely on this: adaptive level switches between neighbouring points make the inner
// value jump by up to the tolerance, and the outer difference quotient amplifies
// such jumps without bound as t shrinks.
Estimate<Point> gradient_estimate(const ScalarField& u, const KernelSpec& spec, const Point& x,
                                  const QuadratureBudget& budget, int fixed_level) {
  budget.validate();
  require_dimension(u.dimension, spec.n, "weighted_gradient");
  const int n = spec.n;
  const Point zero = Point::Zero(n);
  if (is_empty(u.geometry, u.decay_exponent)) return {zero, 0.0, 0};
  const double s = spec.s;
  const double c = spec.c_omega;
  const double ball = spec.r_inner * u.geometry.length_scale();
  auto problem_for = [&](const Point& dir) {
    return ray_problem(u.geometry, u.decay_exponent, x, dir, ball, s, spec.r_outer, 0.0, 1.0 + s);
  };
  auto g = [&](const Point& dir, double t) -> Point {
    return (c * (u(x + t * dir) - u(x - t * dir)) * std::pow(t, -1.0 - s)) * dir;
  };
  if (fixed_level >= 0)
    return {detail::rays_at_level<Point>(n, g, problem_for, budget, fixed_level, zero).value, 0.0, fixed_level};
  return detail::integrate_rays<Point>(n, g, problem_for, budget, zero, at("weighted_gradient", x));
}

Point inner_gradient(const ScalarField& u, const KernelSpec& spec, const Point& y, const QuadratureBudget& budget) {
  return gradient_estimate(u, spec, y, budget, budget.refinement_levels).value;
}

}  // namespace

Estimate<Point> weighted_gradient_estimate(const ScalarField& u, const KernelSpec& spec, const Point& x,
                                           const QuadratureBudget& budget) {
  return gradient_estimate(u, spec, x, budget, -1);
}

Point weighted_gradient(const ScalarField& u, const KernelSpec& spec, const Point& x,
                        const QuadratureBudget& budget) {
  return weighted_gradient_estimate(u, spec, x, budget).value;
}

VectorField weighted_gradient_field(const ScalarField& u, const KernelSpec& spec, const QuadratureBudget& budget) {
  VectorField w;
  w.dimension = u.dimension;
  w.geometry = graded_copy(u.geometry);
  w.decay_exponent = spec.n + spec.s + u.decay_exponent;
  w.eval = [u, spec, budget](const Point& y) { return inner_gradient(u, spec, y, budget); };
  w.id = "wgrad(" + u.id + ")";
  return w;
}

Estimate<double> weighted_divergence_estimate(const VectorField& v, const KernelSpec& spec, const Point& x,
                                              const QuadratureBudget& budget) {
  budget.validate();
  require_dimension(v.dimension, spec.n, "weighted_divergence");
  if (is_empty(v.geometry, v.decay_exponent)) return {0.0, 0.0, 0};
  const int n = spec.n;
  const double s = spec.s;
  const double c = spec.c_omega;
  const double ball = spec.r_inner * v.geometry.length_scale();
  auto problem_for = [&](const Point& dir) {
    return ray_problem(v.geometry, v.decay_exponent, x, dir, ball, s, spec.r_outer, 0.0, 1.0 + s);
  };
  auto g = [&](const Point& dir, double t) {
    return c * std::pow(t, -1.0 - s) * dir.dot(v(x + t * dir) - v(x - t * dir));
  };
  return detail::integrate_rays<double>(n, g, problem_for, budget, 0.0, at("weighted_divergence", x));
}

double weighted_divergence(const VectorField& v, const KernelSpec& spec, const Point& x,
                           const QuadratureBudget& budget) {
  return weighted_divergence_estimate(v, spec, x, budget).value;
}

QuadratureBudget outer_budget(const QuadratureBudget& inner) {
  QuadratureBudget out = inner;
  out.tolerance = nested_outer_relaxation * inner.tolerance;
  return out;
}

Estimate<double> weighted_laplacian_estimate(const ScalarField& u, const KernelSpec& spec, const Point& x,
                                             const NestedBudget& budget) {
  if (is_empty(u.geometry, u.decay_exponent)) return {0.0, 0.0, 0};
  const VectorField w = weighted_gradient_field(u, spec, budget.inner);
  Estimate<double> out = weighted_divergence_estimate(w, spec, x, budget.outer);
  out.error += budget.inner.tolerance * std::abs(out.value);
  return out;
}

double weighted_laplacian(const ScalarField& u, const KernelSpec& spec, const Point& x,
                          const QuadratureBudget& budget) {
  return weighted_laplacian_estimate(u, spec, x, NestedBudget{budget, outer_budget(budget)}).value;
}

double anisotropic_laplacian(const ScalarField& u, const KernelSpec& spec, const DiffusionTensorField& a,
                             const Point& x, const QuadratureBudget& budget) {
  require_dimension(a.dimension, spec.n, "anisotropic_laplacian");
  if (is_empty(u.geometry, u.decay_exponent)) return 0.0;
  const VectorField grad = weighted_gradient_field(u, spec, budget);
  VectorField w = grad;
  auto ge = grad.eval;
  auto ae = a.eval;
  w.eval = [ge, ae](const Point& y) -> Point { return ae(y) * ge(y); };
  w.id = "A*" + grad.id;
  return weighted_divergence(w, spec, x, outer_budget(budget));
}

double anisotropic_laplacian_sqrt_route(const ScalarField& u, const KernelSpec& spec,
                                        const DiffusionTensorField& a, const Point& x,
                                        const QuadratureBudget& budget) {
  budget.validate();
  require_dimension(a.dimension, spec.n, "anisotropic_laplacian_sqrt_route");
  require_dimension(u.dimension, spec.n, "anisotropic_laplacian_sqrt_route");
  const int n = spec.n;
  if (is_empty(u.geometry, u.decay_exponent)) return 0.0;
  // Inner stage: G_{omega~} u(y) = A^{1/2}(y) G_omega u(y).
  auto tilde_grad = [&](const Point& y) -> Point { return a.sqrt(y) * inner_gradient(u, spec, y, budget); };
  const Point flux_x = a.sqrt(x) * tilde_grad(x);
  const double s = spec.s;
  const double c = spec.c_omega;
  const SupportGeometry geometry = graded_copy(u.geometry);
  const double decay = n + s + u.decay_exponent;
  const double ball = spec.r_inner * geometry.length_scale();
  auto problem_for = [&](const Point& dir) {
    return ray_problem(geometry, decay, x, dir, ball, s, spec.r_outer, 0.0, 1.0 + s);
  };
  // Outer stage: omega~(x,y) v(x) + omega~(y,x) v(y) with omega~(x,y) = omega A^{1/2}(x).
  auto g = [&](const Point& dir, double t) {
    const Point yp = x + t * dir;
    const Point ym = x - t * dir;
    const Point fp = flux_x + a.sqrt(yp) * tilde_grad(yp);
    const Point fm = flux_x + a.sqrt(ym) * tilde_grad(ym);
    return c * std::pow(t, -1.0 - s) * (fp.dot(dir) - fm.dot(dir));
  };
  return detail::integrate_rays<double>(n, g, problem_for, outer_budget(budget), 0.0,
                                        at("anisotropic_laplacian_sqrt_route", x))
      .value;
}

double riesz_laplacian(const ScalarField& u, const KernelSpec& spec, const Point& x,
                       const QuadratureBudget& budget) {
  budget.validate();
  require_dimension(u.dimension, spec.n, "riesz_laplacian");
  if (is_empty(u.geometry, u.decay_exponent)) return 0.0;
  const int n = spec.n;
  const double s = spec.s;
  const double c = spec.c_ns;
  const double ux = u(x);
  const double ball = laplacian_ball_fraction * u.geometry.length_scale();
  auto problem_for = [&](const Point& dir) {
    return ray_problem(u.geometry, u.decay_exponent, x, dir, ball, 2.0 * s - 1.0, spec.r_outer, 1.0 + 2.0 * s,
                       1.0 + 2.0 * s);
  };
  auto g = [&](const Point& dir, double t) {
    return c * (2.0 * ux - u(x + t * dir) - u(x - t * dir)) * std::pow(t, -1.0 - 2.0 * s);
  };
  return detail::integrate_rays<double>(n, g, problem_for, budget, 0.0, at("riesz_laplacian", x)).value;
}

}  // namespace anisofrac
