#pragma once

#include "anisofrac/core.hpp"
#include "anisofrac/quadrature.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace anisofrac {

/// Where a field lives and where it stops being smooth.
///
/// The field vanishes outside the closed ball of `radius` about `center`
/// (radius may be infinite). Non-smooth behaviour is confined to spheres about
/// the center: `kink_radii` carry jumps in a derivative, `singular_radii`
/// carry power-type singularities such as (1 - r^2)^s at the support edge.
struct SupportGeometry {
  Point center;
  double radius = std::numeric_limits<double>::infinity();
  std::vector<double> kink_radii;
  std::vector<double> singular_radii;

  bool compact() const { return std::isfinite(radius); }
  /// Distance from x beyond which every ray from x has left the support.
  double exit_distance(const Point& x) const { return (x - center).norm() + radius; }
  /// Radial breakpoints |t| where x + t dir or x - t dir crosses a non-smooth sphere.
  std::vector<Breakpoint> ray_breakpoints(const Point& x, const Point& dir) const;
  /// Reference length for the inner singular ball.
  double length_scale() const { return compact() ? radius : 1.0; }
};

/// A field on R^n. When the support is unbounded the field decays like
/// |x|^(-decay_exponent) far away.
template <typename Value>
struct Field {
  int dimension = 1;
  std::function<Value(const Point&)> eval;
  SupportGeometry geometry;
  double decay_exponent = 0.0;
  std::string id;

  Value operator()(const Point& x) const { return eval(x); }
};

using ScalarField = Field<double>;
using VectorField = Field<Point>;

/// exp(1 - 1 / (1 - (r/R)^2)) on r < R.
ScalarField smooth_bump(int n, double radius = 1.0, const Point& center = Point(), double amplitude = 1.0);

/// (1 - |x|^2)_+^s.
ScalarField getoor_profile(int n, double s);

/// exp(-r^2 / (2 sigma^2)) - exp(-R^2 / (2 sigma^2)) on r < R, continuous at the cut radius R.
ScalarField truncated_gaussian(int n, double sigma, double cut_radius, const Point& center = Point(),
                               double amplitude = 1.0);

ScalarField zero_field(int n);

/// u(x) = c on all of R^n.
ScalarField constant_field(int n, double c);

/// Continuous piecewise-linear interpolant of (nodes, values) in 1-D, zero outside.
ScalarField piecewise_linear(std::vector<double> nodes, std::vector<double> values, std::string id = "pwl");

/// Hat function at nodes[i] on a uniform 1-D grid of spacing h.
ScalarField hat_function(double node, double h);

/// a u + b w.
ScalarField combine(double a, const ScalarField& u, double b, const ScalarField& w);

/// x -> u(x - shift).
ScalarField translate(const ScalarField& u, const Point& shift);

/// Centroid-like default center for an n-vector of zeros.
Point origin(int n);

}  // namespace anisofrac
