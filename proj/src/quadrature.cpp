#include "anisofrac/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace anisofrac {

namespace {

QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// Golub-Welsch on the Jacobi recurrence.
QuadratureRule compute_gauss_jacobi(int n, double a, double b) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    off(k - 1) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(ab + 2.0));
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(compute_gauss_legendre(n));
  return *slot;
}

const QuadratureRule& gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_jacobi: order must be positive");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<QuadratureRule>(compute_gauss_jacobi(n, a, b));
  return *slot;
}

std::string format_change(double change) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", change);
  return buf;
}

void QuadratureBudget::validate() const {
  if (!(tolerance > 0.0)) throw DomainError("QuadratureBudget: tolerance must be positive");
  if (panels_per_annulus < 1 || refinement_levels < 1 || base_order < 1)
    throw DomainError("QuadratureBudget: counts must be at least 1");
}

void NodeSet::add_panel(double a, double b, const QuadratureRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    nodes.push_back(mid + half * rule.nodes[k]);
    weights.push_back(half * rule.weights[k]);
  }
}

NodeSet composite_gauss(double a, double b, int panels, int order) {
  NodeSet set;
  const QuadratureRule& rule = gauss_legendre(order);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) set.add_panel(a + p * width, a + (p + 1) * width, rule);
  return set;
}

NodeSet radial_nodes(const RadialProblem& problem, const QuadratureBudget& budget, int level) {
  const double cutoff = problem.cutoff;
  if (!(cutoff > 0.0)) throw DomainError("radial_nodes: cutoff must be positive");
  const double beta = problem.singular_exponent;
  if (!(beta < 1.0)) throw DomainError("radial_nodes: singular exponent must be below 1");

  const double floor_t = 1e-13 * cutoff;
  std::vector<Breakpoint> bps;
  bool feature_at_origin = false;
  for (const Breakpoint& bp : problem.breakpoints) {
    if (bp.t > floor_t && bp.t < cutoff * (1.0 - 1e-13)) bps.push_back(bp);
    else if (bp.graded && bp.t <= floor_t) feature_at_origin = true;
  }
  std::sort(bps.begin(), bps.end(), [](const Breakpoint& l, const Breakpoint& r) { return l.t < r.t; });

  double r0 = std::min(problem.ball_radius, 0.5 * cutoff);
  if (!bps.empty()) r0 = std::min(r0, 0.5 * bps.front().t);
  if (!(r0 > 0.0)) throw DomainError("radial_nodes: ball radius must be positive");

  const int order = budget.gauss_order(level);
  NodeSet set;

  // A non-smooth profile starting exactly at the evaluation point spoils the
  // pure Jacobi ball, so the ball is split dyadically toward the origin.
  double inner = r0;
  if (feature_at_origin) {
    const QuadratureRule& gl = gauss_legendre(order);
    const double stop = 1e-14 * r0;
    for (; inner > stop; inner *= 0.5) set.add_panel(0.5 * inner, inner, gl);
  }
  const QuadratureRule& jac = gauss_jacobi(order, 0.0, -beta);
  const double half = 0.5 * inner;
  const double scale = std::pow(half, 1.0 - beta);
  for (std::size_t k = 0; k < jac.nodes.size(); ++k) {
    const double t = half * (1.0 + jac.nodes[k]);
    set.add(t, jac.weights[k] * scale * std::pow(t, beta));
  }

  std::vector<double> cuts;
  const double q = std::pow(2.0, 1.0 / budget.panels_per_octave(level));
  for (double r = r0; r < cutoff; r *= q) cuts.push_back(r);
  cuts.push_back(cutoff);

  for (std::size_t i = 0; i < bps.size(); ++i) {
    const double t = bps[i].t;
    cuts.push_back(t);
    if (!bps[i].graded) continue;
    const double left = (i == 0) ? r0 : bps[i - 1].t;
    const double right = (i + 1 == bps.size()) ? cutoff : bps[i + 1].t;
    const double smallest = 1e-14 * t;
    for (double d = 0.5 * (t - left); d > smallest; d *= 0.5) cuts.push_back(t - d);
    for (double d = 0.5 * (right - t); d > smallest; d *= 0.5) cuts.push_back(t + d);
  }
  std::sort(cuts.begin(), cuts.end());
  const QuadratureRule& gl = gauss_legendre(order);
  double a = r0;
  for (double c : cuts) {
    if (c <= a * (1.0 + 1e-15) || c > cutoff) continue;
    set.add_panel(a, c, gl);
    a = c;
  }

  if (problem.tail_exponent != 0.0) {
    if (!(problem.tail_exponent > 1.0)) throw DomainError("radial_nodes: tail exponent must exceed 1");
    set.add(cutoff, cutoff / (problem.tail_exponent - 1.0));
  }
  return set;
}

}  // namespace anisofrac
