#pragma once

#include "anisofrac/core.hpp"
#include "anisofrac/fields.hpp"
#include "anisofrac/kernel.hpp"
#include "anisofrac/quadrature.hpp"
#include "anisofrac/tensor_field.hpp"

#include <functional>
#include <limits>
#include <string>

namespace anisofrac {

/// Two-point kernel pair (alpha, gamma) for the unweighted operators.
/// gamma behaves like |x - y|^{-(n + 2 order)} and gamma = alpha . alpha.
struct UnweightedKernel {
  int dimension = 1;
  double order = 0.5;
  std::function<Point(const Point&, const Point&)> alpha;
  std::function<double(const Point&, const Point&)> gamma;
  std::string id;
};

/// alpha = sqrt(C_{n,s}/2) |y - x|^{-(n+2s)/2} (y - x)/|y - x|, gamma = gamma_FL.
UnweightedKernel fractional_kernel_pair(const KernelSpec& spec);

/// Two-point vector field v(x, y).
///
/// `singular_exponent` describes the paired integrand of the divergence near
/// y = x (it behaves like t^{-singular_exponent}). Beyond `reach` from x the
/// integrand vanishes; with infinite reach the cutoff follows `geometry` and
/// the remainder decays like t^{-tail_exponent} (0 when it vanishes).
struct TwoPointVectorField {
  int dimension = 1;
  std::function<Point(const Point&, const Point&)> eval;
  double singular_exponent = 0.0;
  double tail_exponent = 0.0;
  double reach = std::numeric_limits<double>::infinity();
  SupportGeometry geometry;
  std::string id;
};

/// (u(y) - u(x)) (y - x)/|y - x|.
Point unweighted_gradient(const ScalarField& u, const Point& x, const Point& y);

/// (u(y) - u(x)) alpha(x, y) for the given kernel pair.
Point unweighted_gradient(const ScalarField& u, const UnweightedKernel& kernel, const Point& x, const Point& y);

/// The two-point field (x, y) -> (u(y) - u(x)) alpha(x, y).
TwoPointVectorField unweighted_gradient_field(const ScalarField& u, const UnweightedKernel& kernel);

/// PV of the integral over y of (v(x,y) + v(y,x)) . alpha(x,y).
double unweighted_divergence(const TwoPointVectorField& v, const UnweightedKernel& kernel, const Point& x,
                             const QuadratureBudget& budget);

/// 2 * integral over y of (u(y) - u(x)) gamma(x, y).
double unweighted_laplacian(const ScalarField& u, const UnweightedKernel& kernel, const Point& x,
                            const QuadratureBudget& budget);

/// PV of the integral over y of omega(x,y) (u(y) - u(x)) alpha(x,y).
Point weighted_gradient(const ScalarField& u, const KernelSpec& spec, const Point& x,
                        const QuadratureBudget& budget);
Estimate<Point> weighted_gradient_estimate(const ScalarField& u, const KernelSpec& spec, const Point& x,
                                           const QuadratureBudget& budget);

/// The one-point field y -> G_omega u(y), evaluated lazily at the finest level of
/// `budget` without a stopping test, so that it is a smooth function of y.
VectorField weighted_gradient_field(const ScalarField& u, const KernelSpec& spec, const QuadratureBudget& budget);

/// PV of the integral over y of (omega(x,y) v(x) + omega(y,x) v(y)) . alpha(x,y).
double weighted_divergence(const VectorField& v, const KernelSpec& spec, const Point& x,
                           const QuadratureBudget& budget);
Estimate<double> weighted_divergence_estimate(const VectorField& v, const KernelSpec& spec, const Point& x,
                                              const QuadratureBudget& budget);

/// Budgets for the two stages of a nested operator.
struct NestedBudget {
  QuadratureBudget inner;
  QuadratureBudget outer;
};

/// The inner field changes its panel layout in small discrete steps as the sample
/// point moves, and the singular outer integral magnifies those steps. The outer
/// stopping test is therefore looser than the inner one by this factor.
inline constexpr double nested_outer_relaxation = 100.0;

/// Radius of the Gauss-Jacobi ball in the principal-value laplacians, as a
/// multiple of the support length scale. Their integrand is a second
/// difference, which loses about eps * t^(-2s) to cancellation at small t, so
/// the ball is kept well away from the origin rather than tied to r_inner.
inline constexpr double laplacian_ball_fraction = 0.1;

/// `inner` with the tolerance multiplied by nested_outer_relaxation.
QuadratureBudget outer_budget(const QuadratureBudget& inner);

/// D_omega G_omega u evaluated inner-first. The inner gradient is taken at the
/// finest level of `inner` (no adaptive stopping, so it varies smoothly with the
/// sample point); the error estimate is the outer refinement change plus the
/// inner tolerance times the value.
Estimate<double> weighted_laplacian_estimate(const ScalarField& u, const KernelSpec& spec, const Point& x,
                                             const NestedBudget& budget);
double weighted_laplacian(const ScalarField& u, const KernelSpec& spec, const Point& x,
                          const QuadratureBudget& budget);

/// D_omega(A G_omega u). Like weighted_laplacian, the outer stage uses outer_budget(budget).
double anisotropic_laplacian(const ScalarField& u, const KernelSpec& spec, const DiffusionTensorField& a,
                             const Point& x, const QuadratureBudget& budget);

/// The same operator assembled from the non-symmetric weight omega~(x,y) = omega(x,y) A^{1/2}(x):
/// D_{omega~} G_{omega~} u, which applies A^{1/2} separately at x and y.
double anisotropic_laplacian_sqrt_route(const ScalarField& u, const KernelSpec& spec,
                                        const DiffusionTensorField& a, const Point& x,
                                        const QuadratureBudget& budget);

/// C_{n,s} PV of the integral over y of (u(x) - u(y)) / |x - y|^{n+2s}.
double riesz_laplacian(const ScalarField& u, const KernelSpec& spec, const Point& x,
                       const QuadratureBudget& budget);

}  // namespace anisofrac
