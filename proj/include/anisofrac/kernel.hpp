#pragma once

#include "anisofrac/core.hpp"

#include <cstdint>
#include <string>

namespace anisofrac {

/// Riesz constant C_{n,s} = 4^s Gamma(s + n/2) / (pi^{n/2} |Gamma(-s)|).
double riesz_constant(int n, double s);

/// Integral of |theta_1|^{s+1} over the unit half-sphere theta_1 >= 0.
/// Counting measure on {+1} for n = 1.
double hemisphere_integral(int n, double s);

/// Weight constant in its printed closed form,
/// (2 s sin(pi s / 2) / Gamma(1 - s)) times the hemisphere integral.
double weight_constant(int n, double s);

/// Weight constant for which the weighted Laplacian built from
/// omega = C |x - y|^{-(n+s)} and the unit direction equals -(-Delta)^s:
/// C = 1 / (2 |Gamma(-s)| sin(pi s / 2) H), H the hemisphere integral.
double identified_weight_constant(int n, double s);

/// Fractional kernel data. The truncation radii are dimensionless multiples of
/// the local length scale (|x - z| for two-point kernels, the support radius of
/// the field for operators).
struct KernelSpec {
  double s = 0.5;
  int n = 1;
  double c_ns = 0.0;
  double c_omega = 0.0;
  double r_inner = 1e-3;
  double r_outer = 50.0;

  static KernelSpec fractional(int n, double s, double r_inner = 1e-3, double r_outer = 50.0);
  void validate() const;
  std::string id() const;
  std::uint64_t hash() const;
};

void check_order_and_dimension(int n, double s, const char* who);

/// Unit vector (y - x) / |y - x|.
Point eval_alpha(const Point& x, const Point& y);

/// C_omega |x - y|^{-(n+s)}.
double eval_weight(const KernelSpec& spec, const Point& x, const Point& y);

/// Positive fractional-Laplacian kernel (C_{n,s}/2) |x - y|^{-(n+2s)}.
double eval_gamma_fl(const KernelSpec& spec, const Point& x, const Point& y);

}  // namespace anisofrac
