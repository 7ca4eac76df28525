#pragma once

#include "anisofrac/assembly.hpp"
#include "anisofrac/core.hpp"
#include "anisofrac/grid.hpp"

#include <functional>
#include <vector>

namespace anisofrac {

struct TimeSteppingConfig {
  double t_end = 1.0;
  double dt = 0.01;
  double theta = 1.0;
  int stride = 1;

  void validate() const;
  int steps() const;
};

/// One recorded stride of the energy bookkeeping.
///
/// lhs = l2 + energy with energy = C_coer * int |||u|||^2 (trapezoid over strides),
/// rhs = l2(0) + (C_p^2 / (2 C_coer)) int ||f||_dual^2, and rhs_standard replaces
/// the forcing factor by (C_{n,s}/2) / C_coer, the constant of the usual
/// Young-inequality argument.
struct LedgerEntry {
  double t = 0.0;
  double l2 = 0.0;
  double energy = 0.0;
  double forcing = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_standard = 0.0;
};

struct EnergyLedger {
  double c_coer = 0.0;
  double c_cont = 0.0;
  double c_p = 0.0;
  std::vector<LedgerEntry> entries;

  /// Largest lhs / rhs - 1 over all entries (negative when the bound holds with room).
  double worst_excess() const;
  double worst_excess_standard() const;
  bool holds(double slack) const { return worst_excess() <= slack; }
};

struct Snapshot {
  double t = 0.0;
  Vector u;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  EnergyLedger ledger;
  /// uᵀMu after every step, including step 0.
  std::vector<double> l2_history;
  /// Integral of u over the domain and its centre of mass after every step.
  std::vector<double> mass_history;
  std::vector<double> center_history;
};

/// Time-dependent load vector t -> F(t).
using LoadFunction = std::function<Vector(double)>;

LoadFunction constant_load(const Vector& f);

/// Solves K_A u = F by Cholesky. Throws FactorizationError naming the first non-positive pivot.
DiscreteFunction solve_elliptic(const DiscreteSystem& system);

/// Relative residual ||K_A u - F|| / ||F|| of a solution.
double elliptic_residual(const DiscreteSystem& system, const DiscreteFunction& u);

/// Largest eigenvalue of M^{-1} K.
double spectral_radius(const Matrix& mass, const Matrix& stiffness);

/// Step-size limit 2 / ((1 - 2 theta) lambda_max(M^{-1} K)) for theta < 1/2.
double explicit_step_bound(const Matrix& mass, const Matrix& stiffness, double theta);

/// C_p = 1 / sqrt(mu_min) with mu_min the smallest eigenvalue of (K_iso / (C_{n,s}/2), M).
double estimate_poincare(const DiscreteSystem& system);

Trajectory solve_parabolic(const DiscreteSystem& system, const DiscreteFunction& u0, const LoadFunction& f,
                           const TimeSteppingConfig& cfg);

/// Advection-diffusion with operator K_A + C; requires s in [0.5, 1).
Trajectory solve_transport(const DiscreteSystem& system, const DiscreteFunction& u0, const LoadFunction& f,
                           const TimeSteppingConfig& cfg);

/// Extremal generalised eigenvalues of the pencil (a, b), b SPD.
struct PencilBounds {
  double min = 0.0;
  double max = 0.0;
  Vector argmin;
  Vector argmax;
};
PencilBounds pencil_extremes(const Matrix& a, const Matrix& b);

}  // namespace anisofrac
