#include "anisofrac/verify.hpp"

#include "anisofrac/equivalence_kernel.hpp"
#include "anisofrac/operators.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace anisofrac {

static_assert(registry_covers_all_anchors(), "every anchor needs a registered check");

namespace {

constexpr double tiny = 1e-300;

double relative(double a, double b) { return std::abs(a - b) / std::max(std::max(std::abs(a), std::abs(b)), tiny); }

std::string anchor_of(std::string_view name) { return std::string(registered_anchor(name)); }

// Tensor at the sampled points is c I for a c that may vary with x.
bool scalar_at(const DiffusionTensorField& a, const std::vector<Point>& points, bool require_identity) {
  for (const Point& p : points) {
    const Tensor t = a(p);
    const double d = t(0, 0);
    for (int i = 0; i < t.rows(); ++i)
      for (int j = 0; j < t.cols(); ++j) {
        const double expected = i == j ? d : 0.0;
        if (std::abs(t(i, j) - expected) > 1e-14 * std::abs(d)) return false;
      }
    if (require_identity && d != 1.0) return false;
  }
  return true;
}

}  // namespace

double getoor_load(double s) {
  return std::pow(4.0, s) * std::tgamma(1.0 + s) * std::tgamma(0.5 + s) / std::tgamma(0.5);
}

IdentityReport make_report(std::string name, std::string anchor, double error, double tolerance, std::string grid_id,
                           std::string spec_id, std::string tensor_id) {
  IdentityReport r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.grid_id = std::move(grid_id);
  r.spec_id = std::move(spec_id);
  r.tensor_id = std::move(tensor_id);
  r.error = error;
  r.tolerance = tolerance;
  r.pass = error <= tolerance;
  return r;
}

std::string_view registered_anchor(std::string_view check_name) {
  for (const RegisteredCheck& c : check_registry)
    if (c.name == check_name) return anchor_name(c.anchor);
  throw DomainError("unregistered identity check: " + std::string(check_name));
}

IdentityReport check_operator_equivalence(const KernelSpec& spec, const ScalarField& u,
                                          const std::vector<Point>& points, const QuadratureBudget& budget,
                                          double tolerance) {
  const UnweightedKernel pair = fractional_kernel_pair(spec);
  double worst = 0.0;
  for (const Point& x : points) {
    const double weighted = weighted_laplacian(u, spec, x, budget);
    const double riesz = riesz_laplacian(u, spec, x, budget);
    const double unweighted = unweighted_laplacian(u, pair, x, budget);
    worst = std::max({worst, std::abs(weighted + riesz), std::abs(weighted - unweighted)});
  }
  std::ostringstream name;
  name << "operator-equivalence-s" << spec.s;
  return make_report(name.str(), "fractional-identification", worst, tolerance, "pointwise", spec.id(), u.id);
}

EquivalenceKernelReports check_equivalence_kernel(const KernelSpec& spec, const DiffusionTensorField& a,
                                                  const std::vector<std::pair<Point, Point>>& pairs,
                                                  const QuadratureBudget& budget, const Tolerances& tol) {
  std::vector<Point> sample;
  for (const auto& [x, z] : pairs) {
    sample.push_back(x);
    sample.push_back(z);
  }
  const bool identity = scalar_at(a, sample, true);
  const bool scalar = scalar_at(a, sample, false);
  const double half_c = 0.5 * spec.c_ns;
  const double exponent = spec.n + 2.0 * spec.s;

  double symmetry = 0.0;
  double ratio = 0.0;
  double bracket = 0.0;
  for (const auto& [x, z] : pairs) {
    const double forward = equivalence_kernel(spec, a, x, z, budget);
    const double backward = equivalence_kernel(spec, a, z, x, budget);
    symmetry = std::max(symmetry, relative(forward, backward));
    const double scaled = forward * std::pow((x - z).norm(), exponent) / half_c;
    ratio = std::max(ratio, std::abs(scaled - 1.0));
    const double outside = std::max({a.lambda_min - scaled, scaled - a.lambda_max, 0.0});
    bracket = std::max(bracket, outside / a.lambda_min);
  }

  EquivalenceKernelReports out;
  out.symmetry = make_report("equivalence-kernel-symmetry", anchor_of("equivalence-kernel-symmetry"), symmetry,
                             tol.kernel_symmetry, "pairs", spec.id(), a.id);
  if (identity)
    out.ratio = make_report("equivalence-kernel-ratio", anchor_of("equivalence-kernel-ratio"), ratio,
                            tol.kernel_ratio, "pairs", spec.id(), a.id);
  if (scalar)
    out.bracket = make_report("equivalence-kernel-bracket", anchor_of("equivalence-kernel-bracket"), bracket,
                              tol.kernel_bracket, "pairs", spec.id(), a.id);
  return out;
}

GreenData green_data(const DiscreteSystem& system, const DiffusionTensorField& a, const ScalarField& u,
                     const QuadratureBudget& budget, Execution execution) {
  const std::vector<double> xs = system.grid.dof_coordinates();
  Vector values(static_cast<Eigen::Index>(xs.size()));
  detail::for_each_index(static_cast<int>(xs.size()), execution, [&](int i) {
    values[i] = anisotropic_laplacian(u, system.spec, a, point1(xs[i]), budget);
  });
  GreenData d;
  d.grid_id = system.grid.id();
  d.applied = system.mass * values;
  d.stiffness = system.stiffness * interpolate(system.grid, u);
  return d;
}

double green_defect(const GreenData& data, const Vector& v) {
  if (v.size() != data.applied.size()) throw DomainError("green_defect: test function has the wrong length");
  const double weak = v.dot(data.stiffness);
  const double strong = v.dot(data.applied);
  const double gap = std::abs(strong + weak);
  if (gap == 0.0) return 0.0;
  return gap / std::max(std::abs(weak), tiny);
}

IdentityReport check_green_identity(const DiscreteSystem& system, const GreenData& data, const DiscreteFunction& v,
                                    double tolerance) {
  if (data.grid_id != system.grid.id() || v.grid_id != system.grid.id())
    throw DomainError("check_green_identity: grids differ");
  return make_report("green-identity", anchor_of("green-identity"), green_defect(data, v.coefficients), tolerance,
                     system.grid.id(), system.spec.id(), system.tensor_id);
}

DiscreteFunction random_smooth_function(const Grid& grid, int modes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> c(static_cast<std::size_t>(modes));
  for (double& ck : c) ck = normal(rng);
  const std::vector<double> xs = grid.dof_coordinates();
  DiscreteFunction f{grid.id(), Vector::Zero(static_cast<Eigen::Index>(xs.size()))};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = (xs[i] - grid.a) / (grid.b - grid.a);
    for (int k = 0; k < modes; ++k) f.coefficients[static_cast<Eigen::Index>(i)] += c[k] * std::sin((k + 1) * std::numbers::pi * r);
  }
  return f;
}

Vector random_coefficients(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(size);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return v;
}

IdentityReport check_coercivity_spectrum(const DiscreteSystem& system, double slack) {
  const PencilBounds p = pencil_extremes(system.stiffness, system.gram);
  const double low = (system.lambda_min - p.min) / system.lambda_min;
  const double high = (p.max - system.lambda_max) / system.lambda_max;
  return make_report("coercivity-spectrum", "coercivity-constants", std::max({low, high, 0.0}), slack,
                     system.grid.id(), system.spec.id(), system.tensor_id);
}

IdentityReport check_rayleigh_bounds(const DiscreteSystem& system, int samples, std::uint64_t seed, double slack) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vector u = random_coefficients(system.grid.dof_count(), seed + static_cast<std::uint64_t>(k));
    const double q = u.dot(system.stiffness * u) / u.dot(system.gram * u);
    worst = std::max({worst, (system.lambda_min - q) / system.lambda_min, (q - system.lambda_max) / system.lambda_max});
  }
  return make_report("rayleigh-bounds", anchor_of("rayleigh-bounds"), worst, slack, system.grid.id(),
                     system.spec.id(), system.tensor_id);
}

IdentityReport check_variational_equivalence(const DiscreteSystem& system, double tolerance) {
  const double diff = (system.stiffness - system.gram).cwiseAbs().maxCoeff();
  const double scale = system.gram.cwiseAbs().maxCoeff();
  return make_report("variational-equivalence", anchor_of("variational-equivalence"), diff / scale, tolerance,
                     system.grid.id(), system.spec.id(), system.tensor_id);
}

IdentityReport check_norm_equivalence(const DiscreteSystem& system, int samples, std::uint64_t seed,
                                      double tolerance) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vector u = random_coefficients(system.grid.dof_count(), seed + static_cast<std::uint64_t>(k));
    const double iso = u.dot(system.gram * u);
    worst = std::max(worst, std::abs(u.dot(system.stiffness * u) - iso) / iso);
  }
  return make_report("energy-norm-equivalence", anchor_of("energy-norm-equivalence"), worst, tolerance,
                     system.grid.id(), system.spec.id(), system.tensor_id);
}

IdentityReport check_weight_routes(const KernelSpec& spec, const DiffusionTensorField& a, const ScalarField& u,
                                   const std::vector<Point>& points, const QuadratureBudget& budget,
                                   double tolerance) {
  double gap = 0.0;
  double scale = 0.0;
  for (const Point& x : points) {
    const double direct = anisotropic_laplacian(u, spec, a, x, budget);
    const double rooted = anisotropic_laplacian_sqrt_route(u, spec, a, x, budget);
    gap = std::max(gap, std::abs(direct - rooted));
    scale = std::max(scale, std::abs(direct));
  }
  return make_report("weight-routes", anchor_of("weight-routes"), gap / std::max(scale, tiny), tolerance,
                     "pointwise", spec.id(), a.id);
}

IdentityReport check_transport_coercivity(const DiscreteSystem& system, const Tolerances& tol) {
  const Matrix& c = system.advection;
  if (c.rows() != system.stiffness.rows()) throw DomainError("check_transport_coercivity: no advection matrix");
  const double c_scale = c.cwiseAbs().maxCoeff();
  const double skew = c_scale > 0.0 ? (c + c.transpose()).cwiseAbs().maxCoeff() / c_scale : 0.0;
  const Matrix sym = system.stiffness + 0.5 * (c + c.transpose());
  const double mu = pencil_extremes(sym, system.gram).min;
  const double coercive = std::max(0.0, (system.lambda_min - mu) / system.lambda_min);
  const double error = std::max(skew / tol.advection_skew, coercive / tol.rayleigh_slack);
  return make_report("transport-coercivity", anchor_of("transport-coercivity"), error, 1.0, system.grid.id(),
                     system.spec.id(), system.tensor_id);
}

IdentityReport check_transport_plume(const Trajectory& trajectory, double direction) {
  const std::vector<double>& c = trajectory.center_history;
  const std::vector<double>& m = trajectory.mass_history;
  double worst = c.size() < 2 ? std::numeric_limits<double>::infinity() : 0.0;
  const double scale = m.empty() || m.front() == 0.0 ? 1.0 : std::abs(m.front());
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double step = direction * (c[k] - c[k - 1]);
    // A stalled centre is a failure too, so it contributes the smallest positive error.
    if (step <= 0.0) worst = std::max({worst, -step, std::numeric_limits<double>::denorm_min()});
    worst = std::max(worst, (m[k] - m[k - 1]) / scale);
  }
  return make_report("transport-plume", anchor_of("transport-plume"), worst, 0.0);
}

PlumeRun run_plume(const QuadratureBudget& budget, Execution execution) {
  SystemOptions options;
  options.budget = budget;
  options.execution = execution;
  const Grid grid = build_grid(-1.0, 1.0, 1.0 / 32.0, 2.0);
  const VelocityField drift = constant_velocity(1, 0.8);
  PlumeRun run{build_system(grid, KernelSpec::fractional(1, 0.6), identity_tensor(1), zero_field(1), options, &drift),
               {}};
  const DiscreteFunction u0{grid.id(), interpolate(grid, truncated_gaussian(1, 0.1, 0.4, point1(-0.5), 1.0))};
  TimeSteppingConfig cfg;
  cfg.t_end = 1.0;
  cfg.dt = 0.01;
  run.trajectory = solve_transport(run.system, u0, constant_load(Vector::Zero(grid.dof_count())), cfg);
  return run;
}

IdentityReport check_parabolic_decay(const Trajectory& trajectory, const std::string& name) {
  const std::vector<double>& l2 = trajectory.l2_history;
  const double scale = l2.empty() || l2.front() == 0.0 ? 1.0 : l2.front();
  double worst = 0.0;
  for (std::size_t k = 1; k < l2.size(); ++k) worst = std::max(worst, (l2[k] - l2[k - 1]) / scale);
  return make_report(name, anchor_of(name), worst, 0.0);
}

IdentityReport check_a_priori(const Trajectory& trajectory, const std::string& name, double slack) {
  return make_report(name, anchor_of(name), trajectory.ledger.worst_excess(), slack);
}

bool ConvergenceTable::strictly_decreasing() const {
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (!(rows[k].l2_error < rows[k - 1].l2_error)) return false;
  return true;
}

double ConvergenceTable::last_order() const {
  return rows.size() < 2 ? std::numeric_limits<double>::quiet_NaN() : rows.back().order;
}

IdentityReport check_convergence(const ConvergenceTable& table, double target_order, double center_tolerance) {
  double error = std::numeric_limits<double>::infinity();
  if (table.strictly_decreasing() && !table.rows.empty()) {
    const double order_gap = target_order - table.last_order();
    const double center_gap = std::abs(table.rows.back().center_value - 1.0) - center_tolerance;
    error = std::max({order_gap, center_gap, 0.0});
    if (std::isnan(order_gap)) error = std::numeric_limits<double>::infinity();
  }
  return make_report("convergence-" + table.problem, anchor_of("convergence-" + table.problem), error, 0.0);
}

double l2_error(const Grid& grid, const Vector& coefficients, const ScalarField& exact) {
  const QuadratureRule& rule = gauss_legendre(16);
  double sum = 0.0;
  for (int e = 0; e < grid.element_count(); ++e) {
    if (!grid.element_in_domain(e)) continue;
    const double x0 = grid.nodes[e];
    const double x1 = grid.nodes[e + 1];
    const int d0 = grid.dof_of_node[e];
    const int d1 = grid.dof_of_node[e + 1];
    const double u0 = d0 >= 0 ? coefficients[d0] : 0.0;
    const double u1 = d1 >= 0 ? coefficients[d1] : 0.0;
    const double half = 0.5 * (x1 - x0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double r = 0.5 * (1.0 + rule.nodes[k]);
      const double diff = u0 + (u1 - u0) * r - exact(point1(x0 + 2.0 * half * r));
      sum += half * rule.weights[k] * diff * diff;
    }
  }
  return std::sqrt(sum);
}

ConvergenceTable run_convergence_study(const std::string& problem, double s, const std::vector<int>& mesh_counts,
                                       const QuadratureBudget& budget, Execution execution) {
  const bool getoor = problem == "getoor";
  if (!getoor && problem != "zero-load") throw DomainError("run_convergence_study: unknown problem " + problem);
  const KernelSpec spec = KernelSpec::fractional(1, s);
  const ScalarField exact = getoor ? getoor_profile(1, s) : zero_field(1);
  const ScalarField load = constant_field(1, getoor ? getoor_load(s) : 0.0);
  SystemOptions options;
  options.budget = budget;
  options.execution = execution;
  options.with_gram = false;

  ConvergenceTable table;
  table.problem = problem;
  for (int m : mesh_counts) {
    if (m < 2) throw DomainError("run_convergence_study: need at least two cells");
    const Grid grid = build_grid(-1.0, 1.0, 1.0 / m, 2.0);
    const DiscreteSystem system = build_system(grid, spec, identity_tensor(1), load, options);
    const DiscreteFunction u = solve_elliptic(system);
    ConvergenceRow row;
    row.h = grid.h;
    row.dofs = grid.dof_count();
    row.l2_error = l2_error(grid, u.coefficients, exact);
    row.order = table.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : std::log2(table.rows.back().l2_error / row.l2_error);
    double center = 0.0;
    const std::vector<double> xs = grid.dof_coordinates();
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (std::abs(xs[i]) < 1e-12) center = u.coefficients[static_cast<Eigen::Index>(i)];
    row.center_value = center;
    table.rows.push_back(row);
  }
  return table;
}

KernelBoundsReport scan_kernel_bounds(const KernelSpec& spec, const DiffusionTensorField& a,
                                      const std::vector<std::pair<Point, Point>>& pairs,
                                      const QuadratureBudget& budget) {
  KernelBoundsReport r;
  r.pairs = pairs;
  const double exponent = spec.n + 2.0 * spec.s;
  for (const auto& [x, z] : pairs) {
    const double d = (x - z).norm();
    const double scaled = equivalence_kernel(spec, a, x, z, budget) * std::pow(d, exponent);
    (d <= 1.0 ? r.near_ratios : r.far_ratios).push_back(scaled);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.lambda = r.near_ratios.empty() ? nan : *std::min_element(r.near_ratios.begin(), r.near_ratios.end());
  r.Lambda = r.near_ratios.empty() ? nan : *std::max_element(r.near_ratios.begin(), r.near_ratios.end());
  r.M = r.far_ratios.empty() ? nan : *std::max_element(r.far_ratios.begin(), r.far_ratios.end());
  r.all_positive = std::all_of(r.near_ratios.begin(), r.near_ratios.end(), [](double v) { return v > 0.0; }) &&
                   std::all_of(r.far_ratios.begin(), r.far_ratios.end(), [](double v) { return v > 0.0; });
  return r;
}

std::vector<std::pair<Point, Point>> separated_pairs_1d(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> position(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.25, 4.0);
  std::vector<std::pair<Point, Point>> pairs;
  for (int k = 0; k < count; ++k) {
    const double x = position(rng);
    const double d = gap(rng);
    const double z = (rng() & 1u) ? x + d : x - d;
    pairs.emplace_back(point1(x), point1(z));
  }
  return pairs;
}

std::vector<Point> linspace_points(double lo, double hi, int count) {
  std::vector<Point> pts;
  for (int k = 0; k < count; ++k) pts.push_back(point1(count == 1 ? lo : lo + (hi - lo) * k / (count - 1)));
  return pts;
}

std::vector<IdentityReport> run_default_suite(const SuiteOptions& options) {
  const Tolerances& tol = options.tolerances;
  const QuadratureBudget& budget = options.budget;
  std::vector<IdentityReport> reports;

  const ScalarField bump = smooth_bump(1, 1.0);
  const std::vector<Point> points = linspace_points(-0.8, 0.8, 9);
  for (double s : {0.25, 0.5, 0.75})
    reports.push_back(check_operator_equivalence(KernelSpec::fractional(1, s), bump, points, budget,
                                                 tol.operator_equivalence));

  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const auto pairs = separated_pairs_1d(10, options.seed);
  const DiffusionTensorField identity = identity_tensor(1);
  const DiffusionTensorField sine = sine_tensor(1);
  const EquivalenceKernelReports iso = check_equivalence_kernel(spec, identity, pairs, budget, tol);
  reports.push_back(*iso.ratio);
  const EquivalenceKernelReports scalar = check_equivalence_kernel(spec, sine, pairs, budget, tol);
  reports.push_back(scalar.symmetry);
  reports.push_back(*scalar.bracket);

  SystemOptions sys_options;
  sys_options.budget = budget;
  sys_options.execution = options.execution;
  const Grid grid = build_grid(-1.0, 1.0, 1.0 / 32.0, 2.0);
  const ScalarField unit = constant_field(1, 1.0);
  const DiscreteSystem sys_identity = build_system(grid, spec, identity, unit, sys_options);
  reports.push_back(check_variational_equivalence(sys_identity, tol.variational));
  reports.push_back(check_norm_equivalence(sys_identity, 20, options.seed, tol.norm_equivalence));

  const DiscreteSystem sys_sine = build_system(grid, spec, sine, unit, sys_options);
  reports.push_back(check_rayleigh_bounds(sys_sine, 20, options.seed, tol.rayleigh_slack));
  IdentityReport spectrum_sine = check_coercivity_spectrum(sys_sine, tol.rayleigh_slack);
  spectrum_sine.name = "coercivity-spectrum-sine";
  reports.push_back(spectrum_sine);
  const DiscreteSystem sys_five = build_system(grid, spec, constant_tensor(1, 5.0), unit, sys_options);
  IdentityReport spectrum_five = check_coercivity_spectrum(sys_five, tol.rayleigh_slack);
  spectrum_five.name = "coercivity-spectrum-5I";
  reports.push_back(spectrum_five);

  reports.push_back(check_weight_routes(spec, sine, bump, {point1(-0.4), point1(0.2), point1(0.6)}, budget,
                                        tol.weight_routes));

  const ScalarField smooth = smooth_bump(1, 0.9);
  SystemOptions green_options = sys_options;
  green_options.with_gram = false;
  const Grid fine = build_grid(-1.0, 1.0, 1.0 / 64.0, 2.0);
  const DiscreteSystem sys_fine = build_system(fine, spec, sine, unit, green_options);
  const GreenData coarse_data = green_data(sys_sine, sine, smooth, options.green_budget, options.execution);
  const GreenData fine_data = green_data(sys_fine, sine, smooth, options.green_budget, options.execution);
  const IdentityReport green_coarse =
      check_green_identity(sys_sine, coarse_data, random_smooth_function(grid, 4, options.seed), tol.green);
  const IdentityReport green_fine =
      check_green_identity(sys_fine, fine_data, random_smooth_function(fine, 4, options.seed), tol.green);
  reports.push_back(green_fine);
  const double ratio = green_coarse.error > 0.0 ? green_fine.error / green_coarse.error : 0.0;
  reports.push_back(make_report("green-identity-refinement", anchor_of("green-identity-refinement"), ratio,
                                tol.green_refinement, fine.id(), spec.id(), sine.id));

  const PlumeRun plume = run_plume(budget, options.execution);
  reports.push_back(check_transport_coercivity(plume.system, tol));
  reports.push_back(check_transport_plume(plume.trajectory, 1.0));

  TimeSteppingConfig cfg;
  cfg.t_end = 1.0;
  cfg.dt = 0.01;
  cfg.theta = 1.0;
  const Vector zero = Vector::Zero(grid.dof_count());
  const DiscreteFunction bump0{grid.id(), interpolate(grid, smooth_bump(1, 0.8))};
  const Trajectory unforced = solve_parabolic(sys_identity, bump0, constant_load(zero), cfg);
  reports.push_back(check_parabolic_decay(unforced, "parabolic-decay"));
  reports.push_back(check_a_priori(unforced, "a-priori-unforced", tol.ledger_slack));
  const Trajectory forced =
      solve_parabolic(sys_identity, DiscreteFunction{grid.id(), zero}, constant_load(sys_identity.load), cfg);
  reports.push_back(check_a_priori(forced, "a-priori-forced", tol.ledger_slack));

  const ConvergenceTable table = run_convergence_study("getoor", 0.5, {16, 32, 64, 128}, budget, options.execution);
  reports.push_back(check_convergence(table, tol.convergence_order, 2e-2));

  std::sort(reports.begin(), reports.end(),
            [](const IdentityReport& l, const IdentityReport& r) { return l.name < r.name; });
  return reports;
}

}  // namespace anisofrac
