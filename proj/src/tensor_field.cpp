#include "anisofrac/tensor_field.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace anisofrac {

Tensor spd_sqrt(const Tensor& a) {
  if (a.rows() == 1) {
    if (!(a(0, 0) > 0.0)) throw DomainError("spd_sqrt: matrix is not positive definite");
    Tensor r(1, 1);
    r(0, 0) = std::sqrt(a(0, 0));
    return r;
  }
  if (a.rows() != 2 || a.cols() != 2) throw DomainError("spd_sqrt: only 1x1 and 2x2 supported");
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double tr = a(0, 0) + a(1, 1);
  if (!(det > 0.0 && tr > 0.0)) throw DomainError("spd_sqrt: matrix is not positive definite");
  // For 2x2 SPD matrices sqrt(A) = (A + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
  const double sd = std::sqrt(det);
  Tensor r = a;
  r(0, 0) += sd;
  r(1, 1) += sd;
  return r / std::sqrt(tr + 2.0 * sd);
}

DiffusionTensorField identity_tensor(int n) {
  DiffusionTensorField f = constant_tensor(n, 1.0);
  f.id = "identity";
  return f;
}

DiffusionTensorField constant_tensor(int n, double c) {
  if (n != 1 && n != 2) throw DomainError("constant_tensor: dimension must be 1 or 2");
  if (!(c > 0.0)) throw DomainError("constant_tensor: value must be positive");
  DiffusionTensorField f;
  f.dimension = n;
  const Tensor a = c * Tensor::Identity(n, n);
  const Tensor r = std::sqrt(c) * Tensor::Identity(n, n);
  f.eval = [a](const Point&) { return a; };
  f.sqrt_eval = [r](const Point&) { return r; };
  f.lambda_min = c;
  f.lambda_max = c;
  std::ostringstream os;
  os << "constant-" << c;
  f.id = os.str();
  return f;
}

DiffusionTensorField scalar_tensor(int n, std::function<double(const Point&)> a, double a_min, double a_max,
                                   std::string id) {
  if (n != 1 && n != 2) throw DomainError("scalar_tensor: dimension must be 1 or 2");
  if (!(a_min > 0.0 && a_min <= a_max)) throw DomainError("scalar_tensor: need 0 < a_min <= a_max");
  DiffusionTensorField f;
  f.dimension = n;
  f.eval = [a, n](const Point& x) -> Tensor { return a(x) * Tensor::Identity(n, n); };
  f.sqrt_eval = [a, n](const Point& x) -> Tensor { return std::sqrt(a(x)) * Tensor::Identity(n, n); };
  f.lambda_min = a_min;
  f.lambda_max = a_max;
  f.id = std::move(id);
  return f;
}

DiffusionTensorField sine_tensor(int n, double mean, double amplitude) {
  if (!(mean - std::abs(amplitude) > 0.0)) throw DomainError("sine_tensor: field must stay positive");
  std::ostringstream os;
  os << "sine-" << mean << "-" << amplitude;
  return scalar_tensor(
      n, [mean, amplitude](const Point& x) { return mean + amplitude * std::sin(x(0)); },
      mean - std::abs(amplitude), mean + std::abs(amplitude), os.str());
}

DiffusionTensorField rotated_tensor(double l1, double l2, double twist) {
  if (!(l1 > 0.0 && l2 > 0.0)) throw DomainError("rotated_tensor: eigenvalues must be positive");
  DiffusionTensorField f;
  f.dimension = 2;
  auto build = [twist](const Point& x, double e1, double e2) -> Tensor {
    const double phi = twist * (x(0) + 0.5 * x(1));
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Tensor r(2, 2);
    r << c, -s, s, c;
    Tensor d = Tensor::Zero(2, 2);
    d(0, 0) = e1;
    d(1, 1) = e2;
    Tensor out = r * d * r.transpose();
    const double off = 0.5 * (out(0, 1) + out(1, 0));
    out(0, 1) = off;
    out(1, 0) = off;
    return out;
  };
  f.eval = [build, l1, l2](const Point& x) { return build(x, l1, l2); };
  f.sqrt_eval = [build, l1, l2](const Point& x) { return build(x, std::sqrt(l1), std::sqrt(l2)); };
  f.lambda_min = std::min(l1, l2);
  f.lambda_max = std::max(l1, l2);
  std::ostringstream os;
  os << "rotated-" << l1 << "-" << l2 << "-" << twist;
  f.id = os.str();
  return f;
}

TensorFieldCheck check_tensor_field(const DiffusionTensorField& field, const Point& lo, const Point& hi,
                                    int samples, std::uint64_t seed) {
  const int n = field.dimension;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  TensorFieldCheck out;
  out.min_rayleigh = std::numeric_limits<double>::infinity();
  out.max_rayleigh = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    Point x(n);
    for (int i = 0; i < n; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * unit(rng);
    const Tensor a = field.eval(x);
    const double norm = a.norm();
    out.max_asymmetry = std::max(out.max_asymmetry, (a - a.transpose()).norm() / norm);
    const Tensor r = field.sqrt_eval(x);
    out.max_sqrt_error = std::max(out.max_sqrt_error, (r * r - a).norm() / norm);
    Point v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    v /= v.norm();
    const double q = v.dot(a * v);
    out.min_rayleigh = std::min(out.min_rayleigh, q);
    out.max_rayleigh = std::max(out.max_rayleigh, q);
  }
  const double slack = 1e-12 * field.lambda_max;
  out.ok = out.max_asymmetry <= 1e-14 && out.max_sqrt_error <= 1e-12 &&
           out.min_rayleigh >= field.lambda_min - slack && out.max_rayleigh <= field.lambda_max + slack;
  return out;
}

}  // namespace anisofrac
