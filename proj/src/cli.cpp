#include "anisofrac/cli.hpp"

#include "anisofrac/assembly.hpp"
#include "anisofrac/equivalence_kernel.hpp"
#include "anisofrac/io.hpp"
#include "anisofrac/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace anisofrac {

namespace {

struct Outcome {
  std::vector<IdentityReport> reports;
  std::string notes;
};

bool all_pass(const std::vector<IdentityReport>& reports) {
  for (const IdentityReport& r : reports)
    if (!r.pass) return false;
  return true;
}

KernelSpec spec_of(const RunConfig& c) { return KernelSpec::fractional(c.n, c.s, c.r_inner, c.r_outer); }

SystemOptions system_options(const RunConfig& c) {
  SystemOptions o;
  o.budget = c.budget;
  o.execution = c.execution();
  return o;
}

Series series_of(const CsvTable& table, std::size_t x_col, std::size_t y_col, const std::string& label) {
  Series s{label, {}, {}};
  for (const auto& row : table.rows) {
    s.x.push_back(row[x_col]);
    s.y.push_back(row[y_col]);
  }
  return s;
}

void maybe_export_matrices(const RunConfig& c, const DiscreteSystem& sys) {
  if (!c.export_matrices) return;
  const std::string grid_id = sys.grid.id();
  const std::uint64_t hash = sys.spec.hash();
  export_matrix(c.output_dir / "mass.txt", sys.mass, grid_id, hash);
  export_matrix(c.output_dir / "stiffness.txt", sys.stiffness, grid_id, hash);
  if (sys.gram.size() > 0) export_matrix(c.output_dir / "gram.txt", sys.gram, grid_id, hash);
  if (sys.advection.size() > 0) export_matrix(c.output_dir / "advection.txt", sys.advection, grid_id, hash);
}

Outcome run_verify(const RunConfig& c) {
  SuiteOptions o;
  o.budget = c.budget;
  o.tolerances = c.tolerances;
  o.seed = c.seed;
  o.execution = c.execution();
  return {run_default_suite(o), ""};
}

Outcome run_elliptic(const RunConfig& c) {
  const Grid grid = build_grid(c.a, c.b, c.h, c.collar);
  const DiscreteSystem sys =
      build_system(grid, spec_of(c), make_tensor(c.tensor, c.n), make_scalar(c.forcing, c.n, c.s, true),
                   system_options(c));
  const DiscreteFunction u = solve_elliptic(sys);
  const CsvTable table = nodal_table(grid, u.coefficients, "u [1]");
  write_csv(c.output_dir / "solution.csv", table);
  write_svg(c.output_dir / "solution.svg",
            Chart{"elliptic solution, " + sys.spec.id(), "x", "u", {series_of(table, 0, 1, "u_h")}, false, false});
  maybe_export_matrices(c, sys);
  std::ostringstream notes;
  notes << "grid " << grid.id() << ", " << grid.dof_count() << " dofs\n"
        << "relative residual " << elliptic_residual(sys, u) << "\n";
  return {{}, notes.str()};
}

Outcome run_parabolic(const RunConfig& c) {
  const Grid grid = build_grid(c.a, c.b, c.h, c.collar);
  const ScalarField f = make_scalar(c.forcing, c.n, c.s, true);
  const DiscreteSystem sys = build_system(grid, spec_of(c), make_tensor(c.tensor, c.n), f, system_options(c));
  const DiscreteFunction u0{grid.id(), interpolate(grid, make_scalar(c.initial, c.n, c.s, false))};
  const Trajectory tr = solve_parabolic(sys, u0, constant_load(sys.load), c.time);
  write_trajectory(c.output_dir, "parabolic", grid, tr);
  maybe_export_matrices(c, sys);

  Outcome out;
  out.reports.push_back(check_a_priori(tr, c.forcing.id == "zero" ? "a-priori-unforced" : "a-priori-forced",
                                       c.tolerances.ledger_slack));
  if (c.forcing.id == "zero") out.reports.push_back(check_parabolic_decay(tr, "parabolic-decay"));
  std::ostringstream notes;
  notes << "C_coer " << tr.ledger.c_coer << ", C_cont " << tr.ledger.c_cont << ", C_p " << tr.ledger.c_p << "\n"
        << "worst ledger excess " << tr.ledger.worst_excess() << " (standard forcing constant "
        << tr.ledger.worst_excess_standard() << ")\n";
  out.notes = notes.str();
  return out;
}

Outcome run_transport(const RunConfig& c) {
  const Grid grid = build_grid(c.a, c.b, c.h, c.collar);
  const ScalarField f = make_scalar(c.forcing, c.n, c.s, true);
  const VelocityField drift = constant_velocity(c.n, c.speed);
  const DiscreteSystem sys =
      build_system(grid, spec_of(c), make_tensor(c.tensor, c.n), f, system_options(c), &drift);
  const DiscreteFunction u0{grid.id(), interpolate(grid, make_scalar(c.initial, c.n, c.s, false))};
  const Trajectory tr = solve_transport(sys, u0, constant_load(sys.load), c.time);
  write_trajectory(c.output_dir, "transport", grid, tr);
  maybe_export_matrices(c, sys);

  Outcome out;
  out.reports.push_back(check_transport_coercivity(sys, c.tolerances));
  if (c.speed != 0.0 && c.forcing.id == "zero")
    out.reports.push_back(check_transport_plume(tr, c.speed > 0.0 ? 1.0 : -1.0));
  std::ostringstream notes;
  notes << "centre of mass " << tr.center_history.front() << " -> " << tr.center_history.back() << "\n"
        << "mass " << tr.mass_history.front() << " -> " << tr.mass_history.back() << "\n";
  out.notes = notes.str();
  return out;
}

Outcome run_kernel_table(const RunConfig& c) {
  const KernelSpec spec = spec_of(c);
  const DiffusionTensorField a = make_tensor(c.tensor, c.n);
  CsvTable table;
  table.header = {"x [length]",      "z [length]", "distance [length]", "gamma_eq [length^-(n+2s)]",
                  "gamma_fl [length^-(n+2s)]", "ratio [1]",  "normalised [1]"};
  const double exponent = spec.n + 2.0 * spec.s;
  for (const auto& [x, z] : separated_pairs_1d(c.kernel_pairs, c.seed)) {
    const double d = (x - z).norm();
    const double g = equivalence_kernel(spec, a, x, z, c.budget);
    const double fl = eval_gamma_fl(spec, x, z);
    table.rows.push_back({x(0), z(0), d, g, fl, g / fl, g * std::pow(d, exponent) / (0.5 * spec.c_ns)});
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const std::vector<double>& l, const std::vector<double>& r) { return l[2] < r[2]; });
  write_csv(c.output_dir / "kernel_table.csv", table);
  write_svg(c.output_dir / "kernel_table.svg",
            Chart{"equivalence kernel, tensor " + a.id, "|x - z|", "gamma_eq |x-z|^(n+2s) / (C/2)",
                  {series_of(table, 2, 6, "gamma_eq")}, true, false});
  return {};
}

Outcome run_convergence(const RunConfig& c) {
  const ConvergenceTable study =
      run_convergence_study(c.convergence_problem, c.s, c.convergence_grids, c.budget, c.execution());
  CsvTable table;
  table.header = {"h [length]", "dofs [1]", "l2_error [length^1/2]", "order [1]", "u_h(0) [1]"};
  for (const ConvergenceRow& r : study.rows)
    table.rows.push_back({r.h, static_cast<double>(r.dofs), r.l2_error, r.order, r.center_value});
  write_csv(c.output_dir / "convergence.csv", table);
  write_svg(c.output_dir / "convergence.svg",
            Chart{c.convergence_problem + " convergence, s = " + std::to_string(c.s), "h", "L2 error",
                  {series_of(table, 0, 2, "L2 error")}, true, true});
  Outcome out;
  if (c.convergence_problem == "getoor")
    out.reports.push_back(check_convergence(study, c.tolerances.convergence_order, 2e-2));
  return out;
}

}  // namespace

DiffusionTensorField make_tensor(const FieldChoice& choice, int n) {
  if (choice.id == "identity") return identity_tensor(n);
  if (choice.id == "constant") return constant_tensor(n, choice.value);
  if (choice.id == "sine") return sine_tensor(n, choice.mean, choice.amplitude);
  throw ConfigError("tensor.field: unknown tensor field '" + choice.id + "'");
}

ScalarField make_scalar(const FieldChoice& choice, int n, double s, bool as_forcing) {
  Point center = Point::Zero(n);
  center(0) = choice.center;
  if (choice.id == "zero") return zero_field(n);
  if (choice.id == "constant") return constant_field(n, choice.value);
  if (choice.id == "bump") return smooth_bump(n, choice.radius, center, choice.amplitude);
  if (choice.id == "gaussian") return truncated_gaussian(n, choice.sigma, choice.cut, center, choice.amplitude);
  if (choice.id == "getoor") return as_forcing ? constant_field(n, getoor_load(s)) : getoor_profile(n, s);
  throw ConfigError("unknown field '" + choice.id + "'");
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    validate(config);
    Outcome out;
    switch (config.command) {
      case Command::Verify: out = run_verify(config); break;
      case Command::SolveElliptic: out = run_elliptic(config); break;
      case Command::SolveParabolic: out = run_parabolic(config); break;
      case Command::SolveTransport: out = run_transport(config); break;
      case Command::KernelTable: out = run_kernel_table(config); break;
      case Command::Convergence: out = run_convergence(config); break;
    }
    std::string summary = command_name(config.command) + "\n" + out.notes;
    if (!out.reports.empty()) {
      write_text(config.output_dir / "report.csv", reports_to_csv(out.reports));
      summary += reports_summary(out.reports);
    }
    write_text(config.output_dir / "summary.txt", summary);
    log << summary;
    return all_pass(out.reports) ? exit_ok : exit_check_failure;
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << "\n";
    return exit_numerical_failure;
  }
}

}  // namespace anisofrac
