#include "anisofrac/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <cmath>

using namespace anisofrac;

namespace {

double apply(const QuadratureRule& rule, double (*f)(double, int), int k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i], k);
  return sum;
}

double monomial(double x, int k) { return std::pow(x, k); }
double shifted(double x, int k) { return std::pow(1.0 + x, k); }

double radial(const RadialProblem& p, const QuadratureBudget& b, double (*g)(double)) {
  return integrate_radial<double>([g](double t) { return g(t); }, p, b, 0.0, "test").value;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials of degree below 2n exactly") {
  for (int n : {2, 5, 8, 16}) {
    const QuadratureRule& rule = gauss_legendre(n);
    for (int k = 0; k < 2 * n; ++k) {
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(apply(rule, monomial, k) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK(&gauss_legendre(7) == &gauss_legendre(7));
}

TEST_CASE("Gauss-Jacobi moments") {
  for (double b : {-0.75, -0.5, -0.1, 0.3}) {
    const QuadratureRule& rule = gauss_jacobi(8, 0.0, b);
    for (int j = 0; j < 16; ++j) {
      const double exact = std::pow(2.0, b + j + 1) / (b + j + 1);
      CHECK(apply(rule, shifted, j) == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("radial integral with an endpoint singularity") {
  RadialProblem p;
  p.ball_radius = 0.1;
  p.singular_exponent = 0.5;
  p.cutoff = 1.0;
  const QuadratureBudget budget;
  boost::math::quadrature::tanh_sinh<double> oracle;
  const double expected = oracle.integrate([](double t) { return std::cos(t) / std::sqrt(t); }, 0.0, 1.0);
  CHECK(radial(p, budget, [](double t) { return std::cos(t) / std::sqrt(t); }) ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("graded interior breakpoint") {
  RadialProblem p;
  p.ball_radius = 0.2;
  p.singular_exponent = 0.3;
  p.cutoff = 2.0;
  p.breakpoints = {{1.0, true}};
  auto g = [](double t) { return std::pow(t, -0.3) * std::sqrt(std::abs(t - 1.0)); };
  boost::math::quadrature::tanh_sinh<double> oracle;
  const double expected = oracle.integrate(g, 0.0, 1.0) + oracle.integrate(g, 1.0, 2.0);
  CHECK(radial(p, QuadratureBudget{}, [](double t) { return std::pow(t, -0.3) * std::sqrt(std::abs(t - 1.0)); }) ==
        doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("power-law tail beyond the cutoff") {
  RadialProblem p;
  p.ball_radius = 0.25;
  p.singular_exponent = 0.4;
  p.cutoff = 1.0;
  p.tail_exponent = 2.5;
  const double value =
      radial(p, QuadratureBudget{}, [](double t) { return t <= 1.0 ? std::pow(t, -0.4) : std::pow(t, -2.5); });
  CHECK(value == doctest::Approx(1.0 / 0.6 + 1.0 / 1.5).epsilon(1e-12));
}

TEST_CASE("refinement reports non-convergence") {
  QuadratureBudget budget;
  budget.refinement_levels = 2;
  budget.tolerance = 1e-14;
  int calls = 0;
  auto level = [&calls](int l) {
    ++calls;
    return LevelValue<double>{1.0 + std::pow(0.1, l), 1.0};
  };
  CHECK_THROWS_AS(refine<double>(level, budget, "slow"), ConvergenceError);
  CHECK(calls == 3);
  budget.tolerance = 0.1;
  const Estimate<double> e = refine<double>(level, budget, "fast");
  CHECK(e.level == 2);
  CHECK(e.value == doctest::Approx(1.01));
}

TEST_CASE("budget validation") {
  QuadratureBudget b;
  b.tolerance = 0.0;
  CHECK_THROWS_AS(b.validate(), DomainError);
  b = QuadratureBudget{};
  b.base_order = 0;
  CHECK_THROWS_AS(b.validate(), DomainError);
  CHECK_NOTHROW(QuadratureBudget{}.validate());
}
