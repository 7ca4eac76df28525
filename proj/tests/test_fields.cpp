#include "anisofrac/fields.hpp"
#include "anisofrac/tensor_field.hpp"

#include <doctest.h>

#include <cmath>

using namespace anisofrac;

TEST_CASE("smooth bump") {
  const ScalarField u = smooth_bump(1, 0.8, point1(0.1), 2.0);
  CHECK(u(point1(0.1)) == doctest::Approx(2.0));
  CHECK(u(point1(0.9)) == 0.0);
  CHECK(u(point1(-0.7)) == 0.0);
  CHECK(u(point1(0.5)) == doctest::Approx(2.0 * std::exp(1.0 - 1.0 / (1.0 - 0.25))));
  CHECK(u.geometry.compact());
  CHECK(u.geometry.exit_distance(point1(0.6)) == doctest::Approx(1.3));
  CHECK_THROWS_AS(smooth_bump(1, 0.0), DomainError);
}

TEST_CASE("Getoor profile and its singular edge") {
  const ScalarField u = getoor_profile(1, 0.5);
  CHECK(u(point1(0.0)) == 1.0);
  CHECK(u(point1(0.6)) == doctest::Approx(0.8));
  CHECK(u(point1(1.2)) == 0.0);
  CHECK(u.geometry.singular_radii.size() == 1);
}

TEST_CASE("truncated Gaussian is continuous at the cut") {
  const ScalarField u = truncated_gaussian(1, 0.1, 0.4, point1(-0.5));
  CHECK(std::abs(u(point1(-0.5 + 0.4 - 1e-12))) < 1e-10);
  CHECK(u(point1(-0.5)) == doctest::Approx(1.0 - std::exp(-8.0)));
}

TEST_CASE("piecewise linear, hats and combinations") {
  const ScalarField p = piecewise_linear({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
  CHECK(p(point1(0.5)) == doctest::Approx(1.0));
  CHECK(p(point1(-0.5)) == 0.0);
  const ScalarField hat = hat_function(0.25, 0.5);
  CHECK(hat(point1(0.25)) == doctest::Approx(1.0));
  CHECK(hat(point1(0.5)) == doctest::Approx(0.5));
  CHECK(hat(point1(0.8)) == 0.0);
  const ScalarField c = combine(2.0, smooth_bump(1, 1.0), -1.0, getoor_profile(1, 0.5));
  CHECK(c(point1(0.6)) == doctest::Approx(2.0 * std::exp(1.0 - 1.0 / 0.64) - 0.8));
  CHECK_THROWS_AS(combine(1.0, p, 1.0, hat), DomainError);
  const ScalarField t = translate(p, point1(1.0));
  CHECK(t(point1(2.0)) == doctest::Approx(2.0));
}

TEST_CASE("tensor fields") {
  const DiffusionTensorField sine = sine_tensor(1);
  CHECK(sine(point1(0.0))(0, 0) == doctest::Approx(2.0));
  CHECK(sine.lambda_min == 1.0);
  CHECK(sine.lambda_max == 3.0);
  CHECK(check_tensor_field(sine, point1(-5.0), point1(5.0), 200, 7).ok);

  const DiffusionTensorField rot = rotated_tensor(1.0, 3.0, 0.7);
  const TensorFieldCheck check = check_tensor_field(rot, point2(-1.0, -1.0), point2(1.0, 1.0), 200, 7);
  CHECK(check.ok);
  CHECK(check.max_sqrt_error < 1e-12);
  CHECK(check.min_rayleigh >= 1.0 - 1e-12);
  CHECK(check.max_rayleigh <= 3.0 + 1e-12);

  const Tensor fixed = rotated_tensor(1.0, 3.0, 0.0)(point2(0.4, -0.3));
  CHECK(fixed(0, 0) == doctest::Approx(1.0));
  CHECK(fixed(1, 1) == doctest::Approx(3.0));
  CHECK(std::abs(fixed(0, 1)) < 1e-15);

  Tensor a(2, 2);
  a << 5.0, 2.0, 2.0, 2.0;
  const Tensor r = spd_sqrt(a);
  CHECK((r * r - a).norm() < 1e-13);
  CHECK_THROWS_AS(constant_tensor(1, -1.0), DomainError);
  CHECK_THROWS_AS(sine_tensor(1, 1.0, 1.0), DomainError);
}
