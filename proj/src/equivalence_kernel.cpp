#include "anisofrac/equivalence_kernel.hpp"

#include "rays.hpp"

#include <cmath>
#include <numbers>

namespace anisofrac {

namespace {

// C-infinity step: 1 on [0, r1], 0 on [r2, inf).
double cutoff_window(double r, double r1, double r2) {
  if (r <= r1) return 1.0;
  if (r >= r2) return 0.0;
  const double tau = (r - r1) / (r2 - r1);
  const double a = std::exp(-1.0 / (1.0 - tau));
  const double b = std::exp(-1.0 / tau);
  return a / (a + b);
}

// PV int omega(p,y) alpha(p,y) dy, an odd integrand about p.
Estimate<Point> weighted_direction_moment(const KernelSpec& spec, const Point& p, double length,
                                          const QuadratureBudget& budget) {
  const int n = spec.n;
  auto problem_for = [&](const Point&) {
    RadialProblem prob;
    prob.ball_radius = spec.r_inner * length;
    prob.singular_exponent = spec.s;
    prob.cutoff = spec.r_outer * length;
    prob.tail_exponent = 1.0 + spec.s;
    return prob;
  };
  auto g = [&](const Point& dir, double t) -> Point {
    const Point yp = p + t * dir;
    const Point ym = p - t * dir;
    const Point sum = eval_weight(spec, p, yp) * eval_alpha(p, yp) + eval_weight(spec, p, ym) * eval_alpha(p, ym);
    return std::pow(t, n - 1) * sum;
  };
  // The two halves cancel almost exactly, so the stopping test is scaled by their unpaired size.
  auto g_abs = [&](const Point& dir, double t) {
    const Point yp = p + t * dir;
    const Point ym = p - t * dir;
    const double plus = eval_weight(spec, p, yp) * eval_alpha(p, yp).norm();
    const double minus = eval_weight(spec, p, ym) * eval_alpha(p, ym).norm();
    return std::pow(t, n - 1) * (plus + minus);
  };
  auto level_value = [&](int level) {
    LevelValue<Point> v = detail::rays_at_level<Point>(n, g, problem_for, budget, level, Point::Zero(n));
    v.scale = std::max(v.scale, detail::rays_at_level<double>(n, g_abs, problem_for, budget, level, 0.0).value);
    return v;
  };
  return refine<Point>(level_value, budget, "equivalence_kernel moment");
}

// omega~(y,z) alpha(y,z) . omega~(y,x) alpha(x,y).
double second_term_integrand(const KernelSpec& spec, const DiffusionTensorField& a, const Point& x, const Point& z,
                             const Point& y) {
  const Tensor root = a.sqrt(y);
  const Point left = eval_weight(spec, y, z) * (root * eval_alpha(y, z));
  const Point right = eval_weight(spec, y, x) * (root * eval_alpha(x, y));
  return left.dot(right);
}

Estimate<double> second_term_1d(const KernelSpec& spec, const DiffusionTensorField& a, const Point& x,
                                const Point& z, const QuadratureBudget& budget) {
  const double d = std::abs(z(0) - x(0));
  auto f = [&](double y) { return second_term_integrand(spec, a, x, z, point1(y)); };
  Estimate<double> total{0.0, 0.0, 0};
  for (int side = 0; side < 2; ++side) {
    const double p = side == 0 ? x(0) : z(0);
    const double q = side == 0 ? z(0) : x(0);
    const double away = p > q ? 1.0 : -1.0;
    RadialProblem prob;
    prob.ball_radius = spec.r_inner * d;
    prob.singular_exponent = spec.s;
    prob.breakpoints = {{0.5 * d, false}};
    prob.cutoff = spec.r_outer * d;
    prob.tail_exponent = 2.0 + 2.0 * spec.s;
    auto g = [&](double t) { return t < 0.5 * d ? f(p + t) + f(p - t) : f(p + away * t); };
    const Estimate<double> part = integrate_radial<double>(g, prob, budget, 0.0, "equivalence_kernel");
    total.value += part.value;
    total.error += part.error;
    total.level = std::max(total.level, part.level);
  }
  return total;
}

Estimate<double> second_term_2d(const KernelSpec& spec, const DiffusionTensorField& a, const Point& x,
                                const Point& z, const QuadratureBudget& budget) {
  const double d = (z - x).norm();
  const double r1 = 0.15 * d;
  const double r2 = 0.4 * d;
  auto f = [&](const Point& y) { return second_term_integrand(spec, a, x, z, y); };
  Estimate<double> total{0.0, 0.0, 0};

  // Windows around the two singular points, paired rays.
  for (const Point& p : {x, z}) {
    auto problem_for = [&](const Point&) {
      RadialProblem prob;
      prob.ball_radius = spec.r_inner * d;
      prob.singular_exponent = spec.s;
      prob.breakpoints = {{r1, false}};
      prob.cutoff = r2;
      return prob;
    };
    auto g = [&](const Point& dir, double t) {
      return cutoff_window(t, r1, r2) * (f(p + t * dir) + f(p - t * dir)) * t;
    };
    const Estimate<double> part =
        detail::integrate_rays<double>(2, g, problem_for, budget, 0.0, "equivalence_kernel window");
    total.value += part.value;
    total.error += part.error;
  }

  // Remainder in polar coordinates about the midpoint; smooth everywhere.
  const Point c = 0.5 * (x + z);
  auto level_value = [&](int level) {
    const int order = budget.gauss_order(level);
    NodeSet radial = composite_gauss(0.0, 2.0 * d, 16 * (level + 1), order);
    const double q = std::pow(2.0, 1.0 / budget.panels_per_octave(level));
    const QuadratureRule& gl = gauss_legendre(order);
    const double far = spec.r_outer * d;
    for (double r = 2.0 * d; r < far; r *= q) radial.add_panel(r, std::min(r * q, far), gl);
    const double tail_weight = far / (2.0 + 2.0 * spec.s);
    const int count = 64 * (level + 1);
    LevelValue<double> out{0.0, 0.0};
    for (int k = 0; k < count; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / count;
      const Point dir = point2(std::cos(phi), std::sin(phi));
      double line = 0.0;
      double scale = 0.0;
      for (std::size_t j = 0; j < radial.size(); ++j) {
        const Point y = c + radial.nodes[j] * dir;
        const double keep = 1.0 - cutoff_window((y - x).norm(), r1, r2) - cutoff_window((y - z).norm(), r1, r2);
        if (keep == 0.0) continue;
        const double val = keep * f(y) * radial.nodes[j];
        line += radial.weights[j] * val;
        scale += std::abs(radial.weights[j] * val);
      }
      const Point yf = c + far * dir;
      const double tail = tail_weight * f(yf) * far;
      line += tail;
      scale += std::abs(tail);
      out.value += (2.0 * std::numbers::pi / count) * line;
      out.scale += (2.0 * std::numbers::pi / count) * scale;
    }
    return out;
  };
  const Estimate<double> rest = refine<double>(level_value, budget, "equivalence_kernel remainder");
  total.value += rest.value;
  total.error += rest.error;
  return total;
}

}  // namespace

EquivalenceKernelTerms equivalence_kernel_terms(const KernelSpec& spec, const DiffusionTensorField& a,
                                                const Point& x, const Point& z, const QuadratureBudget& budget) {
  spec.validate();
  budget.validate();
  if (a.dimension != spec.n || x.size() != spec.n || z.size() != spec.n)
    throw DomainError("equivalence_kernel: dimension mismatch");
  const double d = (z - x).norm();
  if (d == 0.0) throw CoincidentPointsError("equivalence_kernel: x and z coincide");

  EquivalenceKernelTerms out;
  const Point axz = eval_alpha(x, z);

  const Estimate<Point> vx = weighted_direction_moment(spec, x, d, budget);
  const Tensor root_x = a.sqrt(x);
  out.gamma_i = eval_weight(spec, x, z) * (root_x * axz).dot(root_x * vx.value);

  const Estimate<Point> vz = weighted_direction_moment(spec, z, d, budget);
  const Tensor root_z = a.sqrt(z);
  // PV int omega(z,y) alpha(y,z) dy is minus the moment about z.
  out.gamma_iib = eval_weight(spec, z, x) * (root_z * axz).dot(root_z * (-vz.value));

  const Estimate<double> second =
      spec.n == 1 ? second_term_1d(spec, a, x, z, budget) : second_term_2d(spec, a, x, z, budget);
  out.gamma_iia = second.value;

  out.value = 0.5 * (out.gamma_i + out.gamma_iia + out.gamma_iib);
  out.error = 0.5 * second.error + eval_weight(spec, x, z) * a.lambda_max * (vx.error + vz.error);
  return out;
}

double equivalence_kernel(const KernelSpec& spec, const DiffusionTensorField& a, const Point& x, const Point& z,
                          const QuadratureBudget& budget) {
  return equivalence_kernel_terms(spec, a, x, z, budget).value;
}

}  // namespace anisofrac
