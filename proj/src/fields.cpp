#include "anisofrac/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anisofrac {

Point origin(int n) { return Point::Zero(n); }

namespace {

Point center_or_origin(int n, const Point& c) {
  if (c.size() == 0) return origin(n);
  if (c.size() != n) throw DomainError("field center has the wrong dimension");
  return c;
}

void append_sphere_crossings(const Point& x, const Point& dir, const Point& center, double rho, bool graded,
                             std::vector<Breakpoint>& out) {
  const Point dx = x - center;
  const double b = dir.dot(dx);
  const double q = dx.squaredNorm() - rho * rho;
  const double disc = b * b - q;
  if (disc < 0.0) return;
  const double root = std::sqrt(disc);
  // Stable pair of roots of t^2 + 2 b t + q = 0.
  const double t1 = (b >= 0.0) ? -b - root : -b + root;
  const double t2 = (t1 != 0.0) ? q / t1 : (-b - t1);
  for (double t : {t1, t2}) {
    const double a = std::abs(t);
    out.push_back({a, graded});
  }
}

}  // namespace

std::vector<Breakpoint> SupportGeometry::ray_breakpoints(const Point& x, const Point& dir) const {
  std::vector<Breakpoint> out;
  if (center.size() != x.size()) return out;
  for (double r : kink_radii) append_sphere_crossings(x, dir, center, r, false, out);
  for (double r : singular_radii) append_sphere_crossings(x, dir, center, r, true, out);
  return out;
}

ScalarField smooth_bump(int n, double radius, const Point& center, double amplitude) {
  if (!(radius > 0.0)) throw DomainError("smooth_bump: radius must be positive");
  ScalarField f;
  f.dimension = n;
  f.geometry.center = center_or_origin(n, center);
  f.geometry.radius = radius;
  f.geometry.kink_radii = {radius};
  const Point c = f.geometry.center;
  f.eval = [c, radius, amplitude](const Point& x) {
    const double q = (x - c).squaredNorm() / (radius * radius);
    if (q >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
  };
  std::ostringstream os;
  os << "bump-R" << radius;
  f.id = os.str();
  return f;
}

ScalarField getoor_profile(int n, double s) {
  ScalarField f;
  f.dimension = n;
  f.geometry.center = origin(n);
  f.geometry.radius = 1.0;
  f.geometry.singular_radii = {1.0};
  f.eval = [s](const Point& x) {
    const double q = 1.0 - x.squaredNorm();
    return q > 0.0 ? std::pow(q, s) : 0.0;
  };
  std::ostringstream os;
  os << "getoor-s" << s;
  f.id = os.str();
  return f;
}

ScalarField truncated_gaussian(int n, double sigma, double cut_radius, const Point& center, double amplitude) {
  if (!(sigma > 0.0 && cut_radius > 0.0)) throw DomainError("truncated_gaussian: parameters must be positive");
  ScalarField f;
  f.dimension = n;
  f.geometry.center = center_or_origin(n, center);
  f.geometry.radius = cut_radius;
  f.geometry.kink_radii = {cut_radius};
  const Point c = f.geometry.center;
  const double floor_value = std::exp(-cut_radius * cut_radius / (2.0 * sigma * sigma));
  f.eval = [c, sigma, cut_radius, amplitude, floor_value](const Point& x) {
    const double r2 = (x - c).squaredNorm();
    if (r2 >= cut_radius * cut_radius) return 0.0;
    return amplitude * (std::exp(-r2 / (2.0 * sigma * sigma)) - floor_value);
  };
  std::ostringstream os;
  os << "gauss-sigma" << sigma << "-R" << cut_radius;
  f.id = os.str();
  return f;
}

ScalarField zero_field(int n) {
  ScalarField f;
  f.dimension = n;
  f.geometry.center = origin(n);
  f.geometry.radius = 0.0;
  f.eval = [](const Point&) { return 0.0; };
  f.id = "zero";
  return f;
}

ScalarField constant_field(int n, double c) {
  ScalarField f;
  f.dimension = n;
  f.geometry.center = origin(n);
  f.eval = [c](const Point&) { return c; };
  std::ostringstream os;
  os << "constant-" << c;
  f.id = os.str();
  return f;
}

ScalarField piecewise_linear(std::vector<double> nodes, std::vector<double> values, std::string id) {
  if (nodes.size() != values.size() || nodes.size() < 2)
    throw DomainError("piecewise_linear: need matching node and value arrays of length >= 2");
  if (!std::is_sorted(nodes.begin(), nodes.end())) throw DomainError("piecewise_linear: nodes must be sorted");
  ScalarField f;
  f.dimension = 1;
  const double lo = nodes.front();
  const double hi = nodes.back();
  const double mid = 0.5 * (lo + hi);
  f.geometry.center = point1(mid);
  f.geometry.radius = 0.5 * (hi - lo);
  for (double x : nodes) f.geometry.kink_radii.push_back(std::abs(x - mid));
  std::sort(f.geometry.kink_radii.begin(), f.geometry.kink_radii.end());
  f.geometry.kink_radii.erase(std::unique(f.geometry.kink_radii.begin(), f.geometry.kink_radii.end()),
                              f.geometry.kink_radii.end());
  f.eval = [nodes = std::move(nodes), values = std::move(values)](const Point& p) {
    const double x = p(0);
    if (x <= nodes.front() || x >= nodes.back()) {
      if (x == nodes.front()) return values.front();
      if (x == nodes.back()) return values.back();
      return 0.0;
    }
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - nodes.begin());
    const double x0 = nodes[k - 1];
    const double x1 = nodes[k];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * values[k - 1] + w * values[k];
  };
  f.id = std::move(id);
  return f;
}

ScalarField hat_function(double node, double h) {
  if (!(h > 0.0)) throw DomainError("hat_function: spacing must be positive");
  ScalarField f;
  f.dimension = 1;
  f.geometry.center = point1(node);
  f.geometry.radius = h;
  f.geometry.kink_radii = {0.0, h};
  f.eval = [node, h](const Point& p) {
    const double r = std::abs(p(0) - node);
    return r < h ? 1.0 - r / h : 0.0;
  };
  std::ostringstream os;
  os << "hat-" << node;
  f.id = os.str();
  return f;
}

ScalarField combine(double a, const ScalarField& u, double b, const ScalarField& w) {
  if (u.dimension != w.dimension) throw DomainError("combine: dimension mismatch");
  ScalarField f;
  f.dimension = u.dimension;
  const auto& gu = u.geometry;
  const auto& gw = w.geometry;
  // A common center keeps the breakpoint bookkeeping exact only when both share it;
  // otherwise use the first center and enclose both supports.
  f.geometry.center = gu.center;
  const double offset = (gw.center - gu.center).norm();
  if (gu.compact() && gw.compact()) {
    f.geometry.radius = std::max(gu.radius, offset + gw.radius);
  }
  if (offset == 0.0) {
    f.geometry.kink_radii = gu.kink_radii;
    f.geometry.kink_radii.insert(f.geometry.kink_radii.end(), gw.kink_radii.begin(), gw.kink_radii.end());
    f.geometry.singular_radii = gu.singular_radii;
    f.geometry.singular_radii.insert(f.geometry.singular_radii.end(), gw.singular_radii.begin(),
                                     gw.singular_radii.end());
  } else {
    f.geometry.kink_radii = gu.kink_radii;
    f.geometry.singular_radii = gu.singular_radii;
    if (!gw.kink_radii.empty() || !gw.singular_radii.empty())
      throw DomainError("combine: non-smooth fields must share a center");
  }
  f.decay_exponent = std::min(u.decay_exponent, w.decay_exponent);
  auto ue = u.eval;
  auto we = w.eval;
  f.eval = [a, b, ue, we](const Point& x) { return a * ue(x) + b * we(x); };
  f.id = "combine(" + u.id + "," + w.id + ")";
  return f;
}

ScalarField translate(const ScalarField& u, const Point& shift) {
  ScalarField f = u;
  f.geometry.center = u.geometry.center + shift;
  auto ue = u.eval;
  f.eval = [ue, shift](const Point& x) { return ue(x - shift); };
  f.id = u.id + "-shifted";
  return f;
}

}  // namespace anisofrac
