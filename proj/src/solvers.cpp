#include "anisofrac/solvers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace anisofrac {

void TimeSteppingConfig::validate() const {
  if (!(dt > 0.0)) throw DomainError("TimeSteppingConfig: dt must be positive");
  if (!(t_end >= dt)) throw DomainError("TimeSteppingConfig: t_end must be at least dt");
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("TimeSteppingConfig: theta must lie in [0,1]");
  if (stride < 1) throw DomainError("TimeSteppingConfig: stride must be at least 1");
}

int TimeSteppingConfig::steps() const { return static_cast<int>(std::lround(t_end / dt)); }

double EnergyLedger::worst_excess() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const LedgerEntry& e : entries) {
    const double excess = (e.lhs - e.rhs) / std::max(e.rhs, std::numeric_limits<double>::min());
    worst = std::max(worst, e.lhs == 0.0 && e.rhs == 0.0 ? 0.0 : excess);
  }
  return worst;
}

double EnergyLedger::worst_excess_standard() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const LedgerEntry& e : entries) {
    const double excess = (e.lhs - e.rhs_standard) / std::max(e.rhs_standard, std::numeric_limits<double>::min());
    worst = std::max(worst, e.lhs == 0.0 && e.rhs_standard == 0.0 ? 0.0 : excess);
  }
  return worst;
}

LoadFunction constant_load(const Vector& f) {
  return [f](double) { return f; };
}

namespace {

// Unpivoted Cholesky that reports where positivity first fails.
[[noreturn]] void report_failed_pivot(const Matrix& a, const std::string& who) {
  const int n = static_cast<int>(a.rows());
  Matrix l = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << who << ": matrix is not positive definite, pivot " << j << " = " << d;
      throw FactorizationError(os.str(), j);
    }
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  throw FactorizationError(who + ": factorization failed", -1);
}

Eigen::LLT<Matrix> cholesky(const Matrix& a, const std::string& who) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) report_failed_pivot(a, who);
  return llt;
}

Trajectory march(const DiscreteSystem& sys, const Matrix& op, const DiscreteFunction& u0, const LoadFunction& f,
                 const TimeSteppingConfig& cfg, const std::string& who) {
  cfg.validate();
  const int n = sys.grid.dof_count();
  if (u0.coefficients.size() != n) throw DomainError(who + ": initial data does not match the grid");
  if (sys.gram.rows() != n) throw DomainError(who + ": the isotropic Gram matrix is required for the ledger");
  const Matrix& m = sys.mass;
  const double dt = cfg.dt;
  const double theta = cfg.theta;
  const bool symmetric = op == op.transpose();

  if (theta < 0.5) {
    const double bound = explicit_step_bound(m, sys.stiffness, theta);
    if (dt > bound) {
      std::ostringstream os;
      os << who << ": dt = " << dt << " exceeds the explicit stability bound " << bound;
      throw StabilityError(os.str());
    }
  }

  const Matrix lhs = m + theta * dt * op;
  const Matrix rhs = m - (1.0 - theta) * dt * op;
  Eigen::LLT<Matrix> llt;
  Eigen::PartialPivLU<Matrix> lu;
  if (symmetric)
    llt = cholesky(lhs, who);
  else
    lu.compute(lhs);

  const double half_c = 0.5 * sys.spec.c_ns;
  EnergyLedger ledger;
  ledger.c_coer = half_c * sys.lambda_min;
  ledger.c_cont = half_c * sys.lambda_max;
  ledger.c_p = estimate_poincare(sys);
  const Eigen::LLT<Matrix> gram = cholesky(sys.gram, who + " (Gram)");
  const double forcing_factor = ledger.c_p * ledger.c_p / (2.0 * ledger.c_coer);
  const double standard_factor = half_c / ledger.c_coer;

  const Vector hat_integrals = Vector::Constant(n, sys.grid.h);
  const std::vector<double> xs = sys.grid.dof_coordinates();
  const Eigen::Map<const Vector> xv(xs.data(), n);

  Trajectory out;
  Vector u = u0.coefficients;
  const double l2_0 = u.dot(m * u);
  auto energy_rate = [&](const Vector& v) { return ledger.c_coer * v.dot(sys.gram * v) / half_c; };
  auto forcing_rate = [&](double t) {
    const Vector ft = f(t);
    return ft.dot(gram.solve(ft));
  };
  auto record_moments = [&](const Vector& v) {
    const double mass = hat_integrals.dot(v);
    out.mass_history.push_back(mass);
    out.center_history.push_back(mass != 0.0 ? hat_integrals.cwiseProduct(xv).dot(v) / mass : 0.0);
    out.l2_history.push_back(v.dot(m * v));
  };

  double t_prev = 0.0;
  double e_prev = energy_rate(u);
  double f_prev = forcing_rate(0.0);
  double energy = 0.0;
  double forcing = 0.0;
  ledger.entries.push_back({0.0, l2_0, 0.0, 0.0, l2_0, l2_0, l2_0});
  out.snapshots.push_back({0.0, u});
  record_moments(u);

  const int steps = cfg.steps();
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    const Vector b = rhs * u + dt * f(t + theta * dt);
    u = symmetric ? Vector(llt.solve(b)) : Vector(lu.solve(b));
    record_moments(u);
    const int step = k + 1;
    if (step % cfg.stride == 0 || step == steps) {
      const double t_now = step * dt;
      const double e_now = energy_rate(u);
      const double f_now = forcing_rate(t_now);
      energy += 0.5 * (t_now - t_prev) * (e_prev + e_now);
      forcing += 0.5 * (t_now - t_prev) * (f_prev + f_now);
      LedgerEntry entry;
      entry.t = t_now;
      entry.l2 = u.dot(m * u);
      entry.energy = energy;
      entry.forcing = forcing;
      entry.lhs = entry.l2 + energy;
      entry.rhs = l2_0 + forcing_factor * forcing;
      entry.rhs_standard = l2_0 + standard_factor * forcing;
      ledger.entries.push_back(entry);
      out.snapshots.push_back({t_now, u});
      t_prev = t_now;
      e_prev = e_now;
      f_prev = f_now;
    }
  }
  out.ledger = std::move(ledger);
  return out;
}

}  // namespace

DiscreteFunction solve_elliptic(const DiscreteSystem& system) {
  const Eigen::LLT<Matrix> llt = cholesky(system.stiffness, "solve_elliptic");
  DiscreteFunction u{system.grid.id(), llt.solve(system.load)};
  const double res = elliptic_residual(system, u);
  if (res > 1e-10) {
    std::ostringstream os;
    os << "solve_elliptic: relative residual " << res << " exceeds 1e-10";
    throw FactorizationError(os.str(), -1);
  }
  return u;
}

double elliptic_residual(const DiscreteSystem& system, const DiscreteFunction& u) {
  const double fn = system.load.norm();
  const double rn = (system.stiffness * u.coefficients - system.load).norm();
  return fn > 0.0 ? rn / fn : rn;
}

PencilBounds pencil_extremes(const Matrix& a, const Matrix& b) {
  const Matrix as = 0.5 * (a + a.transpose());
  const Matrix bs = 0.5 * (b + b.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(as, bs);
  if (solver.info() != Eigen::Success) throw FactorizationError("pencil_extremes: eigen-solver failure", -1);
  PencilBounds out;
  const Eigen::Index n = solver.eigenvalues().size();
  out.min = solver.eigenvalues()(0);
  out.max = solver.eigenvalues()(n - 1);
  out.argmin = solver.eigenvectors().col(0);
  out.argmax = solver.eigenvectors().col(n - 1);
  return out;
}

double spectral_radius(const Matrix& mass, const Matrix& stiffness) { return pencil_extremes(stiffness, mass).max; }

double explicit_step_bound(const Matrix& mass, const Matrix& stiffness, double theta) {
  if (theta >= 0.5) return std::numeric_limits<double>::infinity();
  return 2.0 / ((1.0 - 2.0 * theta) * spectral_radius(mass, stiffness));
}

double estimate_poincare(const DiscreteSystem& system) {
  if (system.gram.rows() != system.mass.rows()) throw DomainError("estimate_poincare: Gram matrix missing");
  const double half_c = 0.5 * system.spec.c_ns;
  const double mu = pencil_extremes(system.gram / half_c, system.mass).min;
  if (!(mu > 0.0)) throw FactorizationError("estimate_poincare: pencil is not positive definite", -1);
  return 1.0 / std::sqrt(mu);
}

Trajectory solve_parabolic(const DiscreteSystem& system, const DiscreteFunction& u0, const LoadFunction& f,
                           const TimeSteppingConfig& cfg) {
  return march(system, system.stiffness, u0, f, cfg, "solve_parabolic");
}

Trajectory solve_transport(const DiscreteSystem& system, const DiscreteFunction& u0, const LoadFunction& f,
                           const TimeSteppingConfig& cfg) {
  if (!(system.spec.s >= 0.5 && system.spec.s < 1.0))
    throw OrderOutOfRangeError("solve_transport: the fractional order must lie in [0.5, 1)");
  const Matrix op = system.stiffness + system.advection;
  return march(system, op, u0, f, cfg, "solve_transport");
}

}  // namespace anisofrac
