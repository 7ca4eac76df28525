#include "anisofrac/kernel.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace anisofrac {

void check_order_and_dimension(int n, double s, const char* who) {
  if (n != 1 && n != 2) throw DomainError(std::string(who) + ": dimension must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw DomainError(std::string(who) + ": order s must lie in (0,1)");
}

double riesz_constant(int n, double s) {
  check_order_and_dimension(n, s, "riesz_constant");
  const double half_n = 0.5 * n;
  return std::pow(4.0, s) * std::tgamma(s + half_n) /
         (std::pow(std::numbers::pi, half_n) * std::abs(std::tgamma(-s)));
}

double hemisphere_integral(int n, double s) {
  check_order_and_dimension(n, s, "hemisphere_integral");
  if (n == 1) return 1.0;
  // Integral of cos^{s+1} over (-pi/2, pi/2) as a Beta function.
  return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(0.5 * (s + 2.0)) - std::lgamma(0.5 * (s + 3.0)));
}

double weight_constant(int n, double s) {
  check_order_and_dimension(n, s, "weight_constant");
  return 2.0 * s * std::sin(0.5 * std::numbers::pi * s) / std::tgamma(1.0 - s) * hemisphere_integral(n, s);
}

double identified_weight_constant(int n, double s) {
  check_order_and_dimension(n, s, "identified_weight_constant");
  return 1.0 / (2.0 * std::abs(std::tgamma(-s)) * std::sin(0.5 * std::numbers::pi * s) * hemisphere_integral(n, s));
}

KernelSpec KernelSpec::fractional(int n, double s, double r_inner, double r_outer) {
  KernelSpec spec;
  spec.n = n;
  spec.s = s;
  spec.r_inner = r_inner;
  spec.r_outer = r_outer;
  check_order_and_dimension(n, s, "KernelSpec");
  spec.c_ns = riesz_constant(n, s);
  spec.c_omega = identified_weight_constant(n, s);
  spec.validate();
  return spec;
}

void KernelSpec::validate() const {
  check_order_and_dimension(n, s, "KernelSpec");
  if (!(r_inner > 0.0 && r_inner < r_outer)) throw DomainError("KernelSpec: need 0 < r_inner < r_outer");
  if (!(c_ns > 0.0 && c_omega > 0.0)) throw DomainError("KernelSpec: constants must be positive");
}

std::string KernelSpec::id() const {
  std::ostringstream os;
  os << "frac-n" << n << "-s" << std::setprecision(6) << s;
  return os.str();
}

std::uint64_t KernelSpec::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  mix(&n, sizeof n);
  for (double v : {s, c_ns, c_omega, r_inner, r_outer}) mix(&v, sizeof v);
  return h;
}

Point eval_alpha(const Point& x, const Point& y) {
  Point d = y - x;
  const double r = d.norm();
  if (r == 0.0) throw CoincidentPointsError("eval_alpha: x and y coincide");
  return d / r;
}

double eval_weight(const KernelSpec& spec, const Point& x, const Point& y) {
  const double r = (y - x).norm();
  if (r == 0.0) throw CoincidentPointsError("eval_weight: x and y coincide");
  return spec.c_omega * std::pow(r, -(spec.n + spec.s));
}

double eval_gamma_fl(const KernelSpec& spec, const Point& x, const Point& y) {
  const double r = (y - x).norm();
  if (r == 0.0) throw CoincidentPointsError("eval_gamma_fl: x and y coincide");
  return 0.5 * spec.c_ns * std::pow(r, -(spec.n + 2.0 * spec.s));
}

}  // namespace anisofrac
