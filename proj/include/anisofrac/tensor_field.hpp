#pragma once

#include "anisofrac/core.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace anisofrac {

/// Symmetric positive definite tensor field x -> A(x) with global eigenvalue bounds.
struct DiffusionTensorField {
  int dimension = 1;
  std::function<Tensor(const Point&)> eval;
  std::function<Tensor(const Point&)> sqrt_eval;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  std::string id;

  Tensor operator()(const Point& x) const { return eval(x); }
  Tensor sqrt(const Point& x) const { return sqrt_eval(x); }
};

/// Principal square root of a symmetric positive definite 1x1 or 2x2 matrix.
Tensor spd_sqrt(const Tensor& a);

DiffusionTensorField identity_tensor(int n);
DiffusionTensorField constant_tensor(int n, double c);

/// A(x) = a(x) I with a_min <= a <= a_max supplied by the caller.
DiffusionTensorField scalar_tensor(int n, std::function<double(const Point&)> a, double a_min, double a_max,
                                   std::string id);

/// A(x) = (mean + amplitude sin(x_1)) I.
DiffusionTensorField sine_tensor(int n, double mean = 2.0, double amplitude = 1.0);

/// Two-dimensional A(x) = R(phi(x)) diag(l1, l2) R(phi(x))^T with phi(x) = twist (x_1 + 0.5 x_2).
DiffusionTensorField rotated_tensor(double l1, double l2, double twist);

struct TensorFieldCheck {
  double max_asymmetry = 0.0;
  double max_sqrt_error = 0.0;
  double min_rayleigh = 0.0;
  double max_rayleigh = 0.0;
  bool ok = false;
};

/// Samples A on the box [lo, hi] and checks symmetry, the eigenvalue bounds on
/// random unit vectors and the square root.
TensorFieldCheck check_tensor_field(const DiffusionTensorField& field, const Point& lo, const Point& hi,
                                    int samples, std::uint64_t seed);

}  // namespace anisofrac
