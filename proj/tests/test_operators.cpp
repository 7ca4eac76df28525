#include "anisofrac/operators.hpp"

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

using namespace anisofrac;

namespace {

const QuadratureBudget budget{};

template <typename T>
T bump_of(const T& x) {
  using std::exp;
  return exp(1.0 - 1.0 / (1.0 - x * x));
}

double bump_value(double x) { return std::abs(x) < 1.0 ? bump_of(x) : 0.0; }

constexpr int max_derivative = 10;

// u^(k)(x) for k = 0..10, by forward-mode automatic differentiation.
std::array<double, max_derivative + 1> bump_derivatives(double x) {
  std::array<double, max_derivative + 1> d{};
  if (std::abs(x) >= 1.0) return d;
  const auto y = bump_of(boost::math::differentiation::make_fvar<double, max_derivative>(x));
  for (int k = 0; k <= max_derivative; ++k) d[k] = y.derivative(k);
  return d;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

// The oracles below integrate with tanh-sinh only on [delta, inf) and use the
// Taylor series of u on [0, delta]. Sampling the difference quotient at tiny t
// would otherwise return rounding noise amplified by t^(-1-2s).
double taylor_radius(double x, double cap) {
  return std::abs(x) < 1.0 ? std::min(cap, 0.25 * (1.0 - std::abs(x))) : 0.0;
}

// 2 int (u(y) - u(x)) gamma_FL dy for the unit bump.
double brute_force_laplacian(double s, double x) {
  const double c = riesz_constant(1, s);
  const double exit = std::abs(x) + 1.0;
  const double delta = taylor_radius(x, 0.02);
  const auto d = bump_derivatives(x);
  double near = 0.0;
  for (int k = 2; k <= 8; k += 2) near += 2.0 * d[k] / factorial(k) * std::pow(delta, k - 2.0 * s) / (k - 2.0 * s);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double ux = d[0];
  const double mid = ts.integrate(
      [&](double t) { return (bump_value(x + t) + bump_value(x - t) - 2.0 * ux) * std::pow(t, -1.0 - 2.0 * s); },
      delta, exit);
  const double far = -2.0 * ux * std::pow(exit, -2.0 * s) / (2.0 * s);
  return c * (near + mid + far);
}

// Fourier-side weighted gradient of the unit bump. The paired kernel
// C sign(h)|h|^{-1-s} has the multiplier 2 i C I sign(xi)|xi|^s with
// I = |Gamma(-s)| sin(pi s / 2); for an even u this leaves
// G u(x) = -(2 C I / pi) int_0^inf u^(xi) xi^s sin(xi x) dxi.
// The transform of the bump is below 1e-15 beyond xi = 600.
double spectral_gradient(const KernelSpec& spec, double x) {
  using boost::math::quadrature::gauss;
  const double s = spec.s;
  const double ci = spec.c_omega * std::abs(std::tgamma(-s)) * std::sin(M_PI * s / 2.0);
  auto transform = [](double xi) {
    double sum = 0.0;
    constexpr int panels = 256;
    for (int p = 0; p < panels; ++p) {
      const double a = static_cast<double>(p) / panels;
      const double b = static_cast<double>(p + 1) / panels;
      sum += gauss<double, 20>::integrate([xi](double r) { return bump_value(r) * std::cos(xi * r); }, a, b);
    }
    return 2.0 * sum;
  };
  double total = 0.0;
  for (int p = 0; p < 600; ++p)
    total += gauss<double, 20>::integrate(
        [&](double xi) { return transform(xi) * std::pow(xi, s) * std::sin(xi * x); }, static_cast<double>(p),
        static_cast<double>(p + 1));
  return -2.0 * ci / M_PI * total;
}

// The j-th derivative of G u(y) = C int_0^inf (u(y+t) - u(y-t)) t^{-1-s} dt,
// which is G applied to u^(j).
double brute_force_gradient(const KernelSpec& spec, int j, double y) {
  const double s = spec.s;
  const double delta = taylor_radius(y, 0.05);
  const auto d = bump_derivatives(y);
  double near = 0.0;
  for (int k = 1; k + j <= max_derivative; k += 2)
    near += 2.0 * d[j + k] / factorial(k) * std::pow(delta, k - s) / (k - s);
  auto uj = [j](double z) { return bump_derivatives(z)[j]; };
  boost::math::quadrature::tanh_sinh<double> ts(10, 1e-12);
  const double exit = std::abs(y) + 1.0;
  const double mid = ts.integrate([&](double t) { return (uj(y + t) - uj(y - t)) * std::pow(t, -1.0 - s); },
                                  std::max(delta, 1e-6 * exit), exit);
  return spec.c_omega * (near + mid);
}

// D_omega(a G_omega u)(x) in 1-D for a = 2 + sin, with the same split: the
// outer Taylor piece needs v' and v''' for v = a G u.
double brute_force_anisotropic(const KernelSpec& spec, double x) {
  const double s = spec.s;
  auto v = [&](double y) { return (2.0 + std::sin(y)) * brute_force_gradient(spec, 0, y); };
  double g[4];
  for (int j = 0; j < 4; ++j) g[j] = brute_force_gradient(spec, j, x);
  const double a0 = 2.0 + std::sin(x), a1 = std::cos(x), a2 = -std::sin(x), a3 = -std::cos(x);
  const double v1 = a1 * g[0] + a0 * g[1];
  const double v3 = a3 * g[0] + 3.0 * a2 * g[1] + 3.0 * a1 * g[2] + a0 * g[3];
  constexpr double delta = 0.01;
  const double near =
      2.0 * v1 * std::pow(delta, 1.0 - s) / (1.0 - s) + 2.0 * v3 / 6.0 * std::pow(delta, 3.0 - s) / (3.0 - s);
  boost::math::quadrature::tanh_sinh<double> ts(10, 1e-10);
  const double far = ts.integrate([&](double t) { return (v(x + t) - v(x - t)) * std::pow(t, -1.0 - s); }, delta,
                                  std::numeric_limits<double>::infinity());
  return spec.c_omega * (near + far);
}

}  // namespace

TEST_CASE("unweighted two-point gradient") {
  const ScalarField c = constant_field(1, 3.0);
  CHECK(unweighted_gradient(c, point1(0.2), point1(1.7)).norm() == 0.0);
  const ScalarField lin = piecewise_linear({-10.0, 10.0}, {-10.0, 10.0});
  CHECK(unweighted_gradient(lin, point1(0.0), point1(2.0))(0) == doctest::Approx(2.0));
  const ScalarField u = smooth_bump(1, 1.0);
  CHECK((unweighted_gradient(u, point1(0.3), point1(-0.4)) - unweighted_gradient(u, point1(-0.4), point1(0.3)))
            .norm() == 0.0);
}

TEST_CASE("unweighted divergence of an antisymmetric field vanishes") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const UnweightedKernel pair = fractional_kernel_pair(spec);
  TwoPointVectorField v;
  v.eval = [](const Point& x, const Point& y) -> Point { return eval_alpha(x, y) * std::exp(-(x - y).squaredNorm()); };
  v.geometry.radius = std::numeric_limits<double>::infinity();
  v.tail_exponent = 2.0;
  CHECK(std::abs(unweighted_divergence(v, pair, point1(0.1), budget)) < 1e-14);
}

TEST_CASE("unweighted divergence of the gradient is the unweighted laplacian") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const UnweightedKernel pair = fractional_kernel_pair(spec);
  const ScalarField u = smooth_bump(1, 1.0);
  const double composed = unweighted_divergence(unweighted_gradient_field(u, pair), pair, point1(0.3), budget);
  const double direct = unweighted_laplacian(u, pair, point1(0.3), budget);
  CHECK(composed == doctest::Approx(direct).epsilon(2e-8));
}

TEST_CASE("unweighted laplacian against a brute-force oracle") {
  for (double s : {0.25, 0.5, 0.75}) {
    const KernelSpec spec = KernelSpec::fractional(1, s);
    const UnweightedKernel pair = fractional_kernel_pair(spec);
    for (double x : {-0.6, -0.45, -0.05, 0.0, 0.05, 0.3, 0.45}) {
      const double oracle = brute_force_laplacian(s, x);
      CHECK(unweighted_laplacian(smooth_bump(1, 1.0), pair, point1(x), budget) ==
            doctest::Approx(oracle).epsilon(1e-7));
      CHECK(riesz_laplacian(smooth_bump(1, 1.0), spec, point1(x), budget) == doctest::Approx(-oracle).epsilon(1e-7));
    }
  }
}

TEST_CASE("Getoor profile under the three laplacians") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const UnweightedKernel pair = fractional_kernel_pair(spec);
  const ScalarField u = getoor_profile(1, 0.5);
  CHECK(unweighted_laplacian(u, pair, point1(0.0), budget) == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(riesz_laplacian(u, spec, point1(0.5), budget) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(riesz_laplacian(u, spec, point1(-0.85), budget) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(weighted_laplacian(u, spec, point1(0.0), budget) == doctest::Approx(-1.0).epsilon(5e-3));
}

TEST_CASE("operators of trivial fields") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  CHECK(weighted_laplacian(zero_field(1), spec, point1(0.2), budget) == 0.0);
  CHECK(unweighted_laplacian(zero_field(1), fractional_kernel_pair(spec), point1(0.2), budget) == 0.0);
  CHECK(riesz_laplacian(constant_field(1, 4.0), spec, point1(0.2), budget) == 0.0);

  VectorField zero{1, [](const Point&) -> Point { return point1(0.0); }, {}, 0.0, "zero"};
  zero.geometry.radius = 0.0;
  CHECK(weighted_divergence(zero, spec, point1(0.3), budget) == 0.0);
  VectorField constant{1, [](const Point&) -> Point { return point1(2.5); }, {}, 0.0, "const"};
  CHECK(std::abs(weighted_divergence(constant, spec, point1(0.3), budget)) < 1e-12);
}

TEST_CASE("weighted gradient: parity, linearity and a spectral oracle") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const ScalarField u = smooth_bump(1, 1.0);
  CHECK(std::abs(weighted_gradient(u, spec, point1(0.0), budget)(0)) < 1e-12);

  const ScalarField w = smooth_bump(1, 0.5, point1(0.0), 3.0);
  const double sum = weighted_gradient(combine(1.0, u, 1.0, w), spec, point1(0.2), budget)(0);
  const double parts =
      weighted_gradient(u, spec, point1(0.2), budget)(0) + weighted_gradient(w, spec, point1(0.2), budget)(0);
  CHECK(sum == doctest::Approx(parts).epsilon(1e-8));

  for (double s : {0.25, 0.5, 0.75}) {
    const KernelSpec sp = KernelSpec::fractional(1, s);
    const double oracle = spectral_gradient(sp, 0.3);
    CHECK(weighted_gradient(u, sp, point1(0.3), budget)(0) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("weighted divergence of the weighted gradient is the weighted laplacian") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const ScalarField u = smooth_bump(1, 1.0);
  const double composed = weighted_divergence(weighted_gradient_field(u, spec, budget), spec, point1(0.3),
                                              outer_budget(budget));
  CHECK(composed == doctest::Approx(weighted_laplacian(u, spec, point1(0.3), budget)).epsilon(1e-12));
}

TEST_CASE("weighted and unweighted laplacians agree on a bump") {
  for (double s : {0.25, 0.75}) {
    const KernelSpec spec = KernelSpec::fractional(1, s);
    const ScalarField u = smooth_bump(1, 1.0);
    const double unweighted = unweighted_laplacian(u, fractional_kernel_pair(spec), point1(-0.45), budget);
    CHECK(weighted_laplacian(u, spec, point1(-0.45), budget) == doctest::Approx(unweighted).epsilon(1e-6));
  }
}

TEST_CASE("anisotropic laplacian") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const ScalarField u = smooth_bump(1, 1.0);
  const Point x = point1(0.2);
  const double plain = weighted_laplacian(u, spec, x, budget);
  CHECK(anisotropic_laplacian(u, spec, identity_tensor(1), x, budget) == doctest::Approx(plain).epsilon(1e-12));
  CHECK(anisotropic_laplacian(u, spec, constant_tensor(1, 5.0), x, budget) ==
        doctest::Approx(5.0 * plain).epsilon(1e-12));

  const DiffusionTensorField sine = sine_tensor(1);
  const double value = anisotropic_laplacian(u, spec, sine, x, budget);
  CHECK(value == doctest::Approx(brute_force_anisotropic(spec, 0.2)).epsilon(1e-6));
  CHECK(anisotropic_laplacian_sqrt_route(u, spec, sine, x, budget) == doctest::Approx(value).epsilon(1e-8));
}
