#pragma once

#include "anisofrac/assembly.hpp"
#include "anisofrac/core.hpp"
#include "anisofrac/fields.hpp"
#include "anisofrac/kernel.hpp"
#include "anisofrac/quadrature.hpp"
#include "anisofrac/solvers.hpp"
#include "anisofrac/tensor_field.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace anisofrac {

/// Outcome of one identity check. `pass` holds exactly when error <= tolerance
/// (a NaN error never passes).
struct IdentityReport {
  std::string name;
  std::string anchor;
  std::string grid_id;
  std::string spec_id;
  std::string tensor_id;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

IdentityReport make_report(std::string name, std::string anchor, double error, double tolerance,
                           std::string grid_id = "-", std::string spec_id = "-", std::string tensor_id = "-");

/// The statements the default suite certifies, named by content.
enum class Anchor : int {
  FractionalIdentification,
  EquivalenceKernelExistence,
  VariationalEquivalence,
  AnisotropicGreenIdentity,
  ParabolicWellPosedness,
  TensorInWeight,
  SymmetricEquivalenceKernel,
  ContinuityCoercivity,
  CoercivityConstants,
  IsotropicKernelBounds,
  TransportCoercivity,
  EnergyNormEquivalence,
  APrioriEstimate,
  Count
};

constexpr std::array<std::string_view, static_cast<int>(Anchor::Count)> anchor_names = {
    "fractional-identification",      "equivalence-kernel-existence", "variational-equivalence",
    "anisotropic-green-identity",     "parabolic-well-posedness",     "tensor-in-weight",
    "symmetric-equivalence-kernel",   "continuity-coercivity",        "coercivity-constants",
    "isotropic-kernel-bounds",        "transport-coercivity",         "energy-norm-equivalence",
    "a-priori-estimate"};

constexpr std::string_view anchor_name(Anchor a) { return anchor_names[static_cast<int>(a)]; }

struct RegisteredCheck {
  std::string_view name;
  Anchor anchor;
};

/// Every check the default suite runs. The suite refuses to compile unless
/// each anchor appears here at least once.
inline constexpr std::array<RegisteredCheck, 20> check_registry = {{
    {"operator-equivalence-s0.25", Anchor::FractionalIdentification},
    {"operator-equivalence-s0.5", Anchor::FractionalIdentification},
    {"operator-equivalence-s0.75", Anchor::FractionalIdentification},
    {"equivalence-kernel-ratio", Anchor::EquivalenceKernelExistence},
    {"equivalence-kernel-symmetry", Anchor::SymmetricEquivalenceKernel},
    {"equivalence-kernel-bracket", Anchor::IsotropicKernelBounds},
    {"variational-equivalence", Anchor::VariationalEquivalence},
    {"energy-norm-equivalence", Anchor::EnergyNormEquivalence},
    {"rayleigh-bounds", Anchor::ContinuityCoercivity},
    {"coercivity-spectrum-sine", Anchor::CoercivityConstants},
    {"coercivity-spectrum-5I", Anchor::CoercivityConstants},
    {"weight-routes", Anchor::TensorInWeight},
    {"green-identity", Anchor::AnisotropicGreenIdentity},
    {"green-identity-refinement", Anchor::AnisotropicGreenIdentity},
    {"transport-coercivity", Anchor::TransportCoercivity},
    {"transport-plume", Anchor::TransportCoercivity},
    {"parabolic-decay", Anchor::ParabolicWellPosedness},
    {"a-priori-unforced", Anchor::APrioriEstimate},
    {"a-priori-forced", Anchor::APrioriEstimate},
    {"convergence-getoor", Anchor::FractionalIdentification},
}};

constexpr bool registry_covers_all_anchors() {
  for (int a = 0; a < static_cast<int>(Anchor::Count); ++a) {
    bool found = false;
    for (const RegisteredCheck& c : check_registry) found = found || static_cast<int>(c.anchor) == a;
    if (!found) return false;
  }
  return true;
}

std::string_view registered_anchor(std::string_view check_name);

/// Per-identity tolerances of the default suite.
struct Tolerances {
  double operator_equivalence = 5e-3;
  double kernel_ratio = 1e-2;
  double kernel_symmetry = 1e-6;
  double kernel_bracket = 1e-6;
  double variational = 1e-5;
  double norm_equivalence = 1e-2;
  double rayleigh_slack = 2e-2;
  double weight_routes = 5e-3;
  double green = 2e-2;
  double green_refinement = 0.5;
  double advection_skew = 1e-12;
  double ledger_slack = 5e-2;
  double convergence_order = 0.5;
};

/// max over points of max(|L_w u + (-Delta)^s u|, |L_w u - L u|) with L the
/// unweighted Laplacian for gamma_FL.
IdentityReport check_operator_equivalence(const KernelSpec& spec, const ScalarField& u,
                                          const std::vector<Point>& points, const QuadratureBudget& budget,
                                          double tolerance);

struct EquivalenceKernelReports {
  IdentityReport symmetry;
  /// Only for A = I: max |gamma_eq / gamma_FL - 1|.
  std::optional<IdentityReport> ratio;
  /// Only for A = a(x) I: largest relative distance of gamma_eq |x-z|^{n+2s}
  /// outside [a_min, a_max] C_{n,s}/2.
  std::optional<IdentityReport> bracket;
};

EquivalenceKernelReports check_equivalence_kernel(const KernelSpec& spec, const DiffusionTensorField& a,
                                                  const std::vector<std::pair<Point, Point>>& pairs,
                                                  const QuadratureBudget& budget, const Tolerances& tol);

/// Both sides of the discrete Green identity for a smooth field u:
/// applied = M (L_{w;A} u at the dofs), stiffness = K_A (interpolant of u).
struct GreenData {
  std::string grid_id;
  Vector applied;
  Vector stiffness;
};

GreenData green_data(const DiscreteSystem& system, const DiffusionTensorField& a, const ScalarField& u,
                     const QuadratureBudget& budget, Execution execution = Execution::Serial);

/// |v . applied + v . stiffness| / max(|v . stiffness|, tiny); zero when v = 0.
double green_defect(const GreenData& data, const Vector& v);

IdentityReport check_green_identity(const DiscreteSystem& system, const GreenData& data,
                                    const DiscreteFunction& v, double tolerance);

/// A smooth random test function: sum over k <= modes of c_k sin(k pi (x - a)/(b - a))
/// with standard normal c_k, interpolated on the dofs.
DiscreteFunction random_smooth_function(const Grid& grid, int modes, std::uint64_t seed);

/// Standard normal coefficients on every dof.
Vector random_coefficients(int size, std::uint64_t seed);

/// Extremal eigenvalues of (K_A, K_iso) against [lambda_min, lambda_max];
/// error = largest relative excursion outside the interval.
IdentityReport check_coercivity_spectrum(const DiscreteSystem& system, double slack);

/// Random Rayleigh quotients uᵀK_A u / uᵀK_iso u against [lambda_min, lambda_max].
IdentityReport check_rayleigh_bounds(const DiscreteSystem& system, int samples, std::uint64_t seed, double slack);

/// ||K_A - K_iso||_max / ||K_iso||_max for a system assembled with A = I.
IdentityReport check_variational_equivalence(const DiscreteSystem& system, double tolerance);

/// max |uᵀK_A u - uᵀK_iso u| / uᵀK_iso u over random u, A = I.
IdentityReport check_norm_equivalence(const DiscreteSystem& system, int samples, std::uint64_t seed,
                                      double tolerance);

/// D_w(A G_w u) against the route through the weight A^{1/2} omega, relative to
/// the largest magnitude over the points.
IdentityReport check_weight_routes(const KernelSpec& spec, const DiffusionTensorField& a, const ScalarField& u,
                                   const std::vector<Point>& points, const QuadratureBudget& budget,
                                   double tolerance);

/// Skew part of C and the smallest eigenvalue of (sym(K_A + C), K_iso) against lambda_min.
/// The error is the larger of the two defects, each divided by its own tolerance,
/// so the report passes below 1.
IdentityReport check_transport_coercivity(const DiscreteSystem& system, const Tolerances& tol);

/// Plume behaviour of a transport run with drift sign `direction` (+1 or -1):
/// the centre of mass moves strictly along the drift and the mass never grows.
/// The error is the largest backward centre step (in length units) or relative
/// mass increase, so a passing run has error 0.
IdentityReport check_transport_plume(const Trajectory& trajectory, double direction);

/// Largest relative increase of uᵀMu between consecutive steps (0 when monotone).
IdentityReport check_parabolic_decay(const Trajectory& trajectory, const std::string& name);

/// Ledger inequality lhs <= rhs (1 + slack) at every stride.
IdentityReport check_a_priori(const Trajectory& trajectory, const std::string& name, double slack);

struct ConvergenceRow {
  double h = 0.0;
  int dofs = 0;
  double l2_error = 0.0;
  /// log2(e(2h) / e(h)); NaN on the coarsest grid.
  double order = 0.0;
  double center_value = 0.0;
};

struct ConvergenceTable {
  std::string problem;
  std::vector<ConvergenceRow> rows;

  bool strictly_decreasing() const;
  double last_order() const;
};

/// Getoor study summary: error = max(target order - last order, |u_h(0) - 1| - center_tolerance, 0),
/// infinite when the errors do not decrease strictly; tolerance 0.
IdentityReport check_convergence(const ConvergenceTable& table, double target_order, double center_tolerance);

/// The constant load on (-1, 1) whose solution for A = I, n = 1 is (1 - x^2)_+^s.
double getoor_load(double s);

/// Problems with a known solution on (-1, 1), A = I, n = 1:
///   "getoor"    f = 4^s Gamma(1 + s) Gamma(1/2 + s) / Gamma(1/2), exact u = (1 - x^2)_+^s;
///   "zero-load" f = 0, exact u = 0.
/// `mesh_counts` lists the values of 1/h.
ConvergenceTable run_convergence_study(const std::string& problem, double s, const std::vector<int>& mesh_counts,
                                       const QuadratureBudget& budget, Execution execution = Execution::Serial);

/// L2(a, b) distance between a piecewise-linear discrete function and a field.
double l2_error(const Grid& grid, const Vector& coefficients, const ScalarField& exact);

/// Empirical kernel bounds over sampled pairs; report only.
struct KernelBoundsReport {
  std::vector<std::pair<Point, Point>> pairs;
  /// gamma_eq |x - z|^{n+2s} for |x - z| <= 1 and > 1.
  std::vector<double> near_ratios;
  std::vector<double> far_ratios;
  double lambda = 0.0;
  double Lambda = 0.0;
  double M = 0.0;
  bool all_positive = false;
};

KernelBoundsReport scan_kernel_bounds(const KernelSpec& spec, const DiffusionTensorField& a,
                                      const std::vector<std::pair<Point, Point>>& pairs,
                                      const QuadratureBudget& budget);

/// The default pair sample: `count` separated pairs in 1-D with |x - z| in [0.25, 4].
std::vector<std::pair<Point, Point>> separated_pairs_1d(int count, std::uint64_t seed);

std::vector<Point> linspace_points(double lo, double hi, int count);

/// The plume scenario shared by the suite and the acceptance tests: s = 0.6,
/// drift 0.8, Gaussian (sigma 0.1, cut 0.4) centred at -0.5 on (-1, 1), h = 1/32.
struct PlumeRun {
  DiscreteSystem system;
  Trajectory trajectory;
};
PlumeRun run_plume(const QuadratureBudget& budget, Execution execution);

struct SuiteOptions {
  QuadratureBudget budget;
  /// Cheaper budget for the pointwise operator in the Green check.
  QuadratureBudget green_budget{2, 2, 1e-5, 4};
  Tolerances tolerances;
  std::uint64_t seed = 12345;
  Execution execution = Execution::Serial;
};

/// Runs every registered check; reports are ordered by check name.
std::vector<IdentityReport> run_default_suite(const SuiteOptions& options);

}  // namespace anisofrac
