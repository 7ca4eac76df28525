#include "anisofrac/kernel.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>

using namespace anisofrac;
using High = boost::multiprecision::cpp_bin_float_50;

namespace {

High pi_high() { return boost::math::constants::pi<High>(); }

High riesz_oracle(int n, High s) {
  using boost::multiprecision::abs;
  using boost::multiprecision::pow;
  return pow(High(4), s) * boost::math::tgamma(s + High(n) / 2) /
         (pow(pi_high(), High(n) / 2) * abs(boost::math::tgamma(-s)));
}

// Hemisphere integral of |theta_1|^{s+1} in 2-D: int_{-pi/2}^{pi/2} cos^{s+1}(phi) dphi
// = sqrt(pi) Gamma((s+2)/2) / Gamma((s+3)/2).
High hemisphere_oracle_2d(High s) {
  using boost::multiprecision::sqrt;
  return sqrt(pi_high()) * boost::math::tgamma((s + 2) / 2) / boost::math::tgamma((s + 3) / 2);
}

}  // namespace

TEST_CASE("riesz constant against a 50-digit oracle") {
  CHECK(riesz_constant(1, 0.5) == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
  CHECK(riesz_constant(2, 0.5) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));
  for (int n : {1, 2})
    for (double s : {0.1, 0.25, 0.5, 0.6, 0.75, 0.9}) {
      const double expected = static_cast<double>(riesz_oracle(n, High(s)));
      CHECK(std::abs(riesz_constant(n, s) - expected) <= 1e-10 * expected);
    }
}

TEST_CASE("riesz constant stays positive over the order range") {
  for (int k = 1; k < 100; ++k) CHECK(riesz_constant(1, k / 100.0) > 0.0);
}

TEST_CASE("printed weight constant") {
  const High expected = 2 * High(0.5) * sin(pi_high() / 4) / boost::math::tgamma(High(0.5));
  CHECK(std::abs(weight_constant(1, 0.5) - static_cast<double>(expected)) <= 1e-10);
  CHECK(weight_constant(1, 0.5) == doctest::Approx(0.3989423).epsilon(1e-7));
  CHECK(weight_constant(1, 0.5) == weight_constant(1, 0.5));
}

TEST_CASE("hemisphere integral in two dimensions") {
  for (double s : {0.25, 0.5, 0.75}) {
    const double expected = static_cast<double>(hemisphere_oracle_2d(High(s)));
    CHECK(std::abs(hemisphere_integral(2, s) - expected) <= 1e-10 * expected);
  }
  CHECK(hemisphere_integral(1, 0.3) == 1.0);
}

TEST_CASE("identified weight constant reproduces the riesz constant") {
  // For omega = C |h|^{-(n+s)}, D_omega G_omega has the symbol
  // -(2 C |Gamma(-s)| sin(pi s / 2) H)^2 |xi|^{2s}; the identified constant makes it -|xi|^{2s}.
  for (int n : {1, 2})
    for (double s : {0.25, 0.5, 0.75}) {
      const double c = identified_weight_constant(n, s);
      const double symbol = 2.0 * c * std::abs(std::tgamma(-s)) * std::sin(M_PI * s / 2.0) * hemisphere_integral(n, s);
      CHECK(symbol == doctest::Approx(1.0).epsilon(1e-12));
    }
  CHECK(identified_weight_constant(1, 0.5) == doctest::Approx(0.5 * weight_constant(1, 0.5)).epsilon(1e-12));
}

TEST_CASE("alpha is the unit direction and antisymmetric") {
  CHECK(eval_alpha(point1(0.0), point1(1.0))(0) == 1.0);
  const Point a = eval_alpha(point2(0.0, 0.0), point2(3.0, 4.0));
  CHECK(a(0) == doctest::Approx(0.6));
  CHECK(a(1) == doctest::Approx(0.8));
  const Point x = point2(0.3, -1.2);
  const Point y = point2(-0.7, 2.5);
  CHECK((eval_alpha(x, y) + eval_alpha(y, x)).norm() == 0.0);
  CHECK_THROWS_AS(eval_alpha(x, x), CoincidentPointsError);
}

TEST_CASE("weight and fractional kernel values") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  CHECK(eval_weight(spec, point1(0.0), point1(1.0)) == doctest::Approx(spec.c_omega));
  CHECK(eval_weight(spec, point1(0.0), point1(2.0)) == doctest::Approx(spec.c_omega * std::pow(2.0, -1.5)));
  CHECK(eval_weight(spec, point1(0.4), point1(-1.0)) == eval_weight(spec, point1(-1.0), point1(0.4)));
  CHECK(eval_gamma_fl(spec, point1(0.0), point1(1.0)) == doctest::Approx(1.0 / (2.0 * M_PI)));
  CHECK(eval_gamma_fl(spec, point1(0.0), point1(2.0)) ==
        doctest::Approx(eval_gamma_fl(spec, point1(0.0), point1(1.0)) / 4.0));
  CHECK_THROWS_AS(eval_gamma_fl(spec, point1(0.2), point1(0.2)), CoincidentPointsError);
}

TEST_CASE("kernel spec validation") {
  CHECK_THROWS_AS(KernelSpec::fractional(1, 1.2), DomainError);
  CHECK_THROWS_AS(KernelSpec::fractional(1, 0.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::fractional(3, 0.5), DomainError);
  CHECK_THROWS_AS(KernelSpec::fractional(1, 0.5, 2.0, 1.0), DomainError);
  CHECK(KernelSpec::fractional(1, 0.5).hash() == KernelSpec::fractional(1, 0.5).hash());
  CHECK(KernelSpec::fractional(1, 0.5).hash() != KernelSpec::fractional(1, 0.25).hash());
}
