// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.

#include "anisofrac/cli.hpp"
#include "anisofrac/config.hpp"
#include "anisofrac/kernel.hpp"
#include "anisofrac/verify.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace anisofrac;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::string describe(const IdentityReport& r) {
  return r.name + " " + sci(r.error) + " (tol " + sci(r.tolerance) + ")";
}

Verdict combine(const std::vector<IdentityReport>& reports) {
  Verdict v{true, ""};
  for (const IdentityReport& r : reports) {
    v.pass = v.pass && r.pass;
    v.detail += (v.detail.empty() ? "" : "; ") + describe(r);
  }
  return v;
}

Verdict constants() {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big pi = boost::math::constants::pi<big>();
  const big riesz_ref = 1 / pi;
  const big weight_ref = sin(pi / 4) / boost::math::tgamma(big(0.5));
  const double riesz_err = std::abs(riesz_constant(1, 0.5) - riesz_ref.convert_to<double>());
  const double weight_err = std::abs(weight_constant(1, 0.5) - weight_ref.convert_to<double>());
  return {riesz_err <= 1e-10 && weight_err <= 1e-10,
          "riesz_constant error " + sci(riesz_err) + ", weight_constant error " + sci(weight_err)};
}

Verdict operator_equivalence(const Tolerances& tol) {
  std::vector<IdentityReport> reports;
  const std::vector<Point> points = linspace_points(-0.8, 0.8, 9);
  for (double s : {0.25, 0.5, 0.75})
    reports.push_back(check_operator_equivalence(KernelSpec::fractional(1, s), smooth_bump(1, 1.0), points,
                                                 QuadratureBudget{}, tol.operator_equivalence));
  return combine(reports);
}

Verdict equivalence_kernel_check(const Tolerances& tol, std::uint64_t seed) {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const auto pairs = separated_pairs_1d(10, seed);
  const EquivalenceKernelReports iso = check_equivalence_kernel(spec, identity_tensor(1), pairs, {}, tol);
  const EquivalenceKernelReports sine = check_equivalence_kernel(spec, sine_tensor(1), pairs, {}, tol);
  return combine({*iso.ratio, sine.symmetry, *sine.bracket});
}

Verdict variational(const Tolerances& tol, std::uint64_t seed) {
  const Grid grid = build_grid(-1.0, 1.0, 1.0 / 32.0, 2.0);
  const DiscreteSystem sys = build_system(grid, KernelSpec::fractional(1, 0.5), identity_tensor(1),
                                          constant_field(1, 1.0), SystemOptions{});
  return combine({check_variational_equivalence(sys, tol.variational),
                  check_norm_equivalence(sys, 20, seed, tol.norm_equivalence)});
}

Verdict coercivity(const Tolerances& tol) {
  const Grid grid = build_grid(-1.0, 1.0, 1.0 / 32.0, 2.0);
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  IdentityReport sine = check_coercivity_spectrum(
      build_system(grid, spec, sine_tensor(1), zero_field(1), SystemOptions{}), tol.rayleigh_slack);
  sine.name = "coercivity-spectrum-sine";
  IdentityReport five = check_coercivity_spectrum(
      build_system(grid, spec, constant_tensor(1, 5.0), zero_field(1), SystemOptions{}), tol.rayleigh_slack);
  five.name = "coercivity-spectrum-5I";
  return combine({sine, five});
}

RunConfig getoor_config(const fs::path& out) {
  RunConfig c;
  c.command = Command::Convergence;
  c.s = 0.5;
  c.convergence_problem = "getoor";
  c.convergence_grids = {16, 32, 64, 128};
  c.output_dir = out;
  return c;
}

RunConfig parabolic_config(const fs::path& out, bool forced) {
  RunConfig c;
  c.command = Command::SolveParabolic;
  c.h = 1.0 / 32.0;
  c.s = 0.5;
  c.tensor = FieldChoice{"identity"};
  if (forced) {
    c.forcing = FieldChoice{"constant"};
    c.forcing.value = 1.0;
    c.initial = FieldChoice{"zero"};
  } else {
    c.forcing = FieldChoice{"zero"};
    c.initial = FieldChoice{"bump"};
    c.initial.radius = 0.8;
  }
  c.time = TimeSteppingConfig{1.0, 0.01, 1.0, 10};
  c.output_dir = out;
  return c;
}

// Runs a command quietly and returns its exit code with the check lines of its summary.
Verdict run_command(const RunConfig& c) {
  std::ostringstream log;
  const int code = run(c, log);
  std::string checks;
  std::istringstream lines(log.str());
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind("FAIL", 0) == 0 || line.rfind("PASS", 0) == 0) checks += (checks.empty() ? "" : "; ") + line;
  return {code == exit_ok, "exit " + std::to_string(code) + (checks.empty() ? "" : ": " + checks)};
}

Verdict getoor(const fs::path& out) { return run_command(getoor_config(out)); }

Verdict parabolic(const fs::path& out) {
  const Verdict unforced = run_command(parabolic_config(out / "unforced", false));
  const Verdict forced = run_command(parabolic_config(out / "forced", true));
  return {unforced.pass && forced.pass, "unforced " + unforced.detail + " | forced " + forced.detail};
}

Verdict transport(const Tolerances& tol) {
  bool rejected = false;
  try {
    RunConfig c;
    c.command = Command::SolveTransport;
    c.s = 0.4;
    c.initial = FieldChoice{"gaussian"};
    c.speed = 1.0;
    validate(c);
  } catch (const ConfigError&) {
    rejected = true;
  }
  const PlumeRun plume = run_plume(QuadratureBudget{}, Execution::Serial);
  const Matrix& c = plume.system.advection;
  const double skew = (c + c.transpose()).cwiseAbs().maxCoeff() / c.cwiseAbs().maxCoeff();
  Verdict v = combine({check_transport_plume(plume.trajectory, 1.0), check_transport_coercivity(plume.system, tol)});
  v.pass = v.pass && rejected && skew <= 1e-12;
  v.detail = std::string(rejected ? "s = 0.4 rejected" : "s = 0.4 ACCEPTED") + "; skew " + sci(skew) + "; centre " +
             sci(plume.trajectory.center_history.front()) + " -> " + sci(plume.trajectory.center_history.back()) +
             "; " + v.detail;
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Every CSV under `a` must exist under `b` with identical bytes.
Verdict same_csvs(const fs::path& a, const fs::path& b) {
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path twin = b / fs::relative(entry.path(), a);
    ++files;
    if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin))
      return {false, "differs: " + fs::relative(entry.path(), a).string()};
  }
  return {files > 0, std::to_string(files) + " CSV files byte-identical"};
}

Verdict determinism(const fs::path& out) {
  for (const char* run_id : {"first", "second"}) {
    const fs::path root = out / run_id;
    std::ostringstream sink;
    run(getoor_config(root / "getoor"), sink);
    run(parabolic_config(root / "parabolic" / "unforced", false), sink);
    run(parabolic_config(root / "parabolic" / "forced", true), sink);
  }
  return same_csvs(out / "first", out / "second");
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::remove_all(out);
  const Tolerances tol;
  const std::uint64_t seed = 12345;

  struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "constants", [] { return constants(); }},
      {2, "operator equivalence", [&] { return operator_equivalence(tol); }},
      {3, "Getoor benchmark", [&] { return getoor(out / "getoor"); }},
      {4, "equivalence kernel", [&] { return equivalence_kernel_check(tol, seed); }},
      {5, "variational and norm equivalence", [&] { return variational(tol, seed); }},
      {6, "coercivity spectrum", [&] { return coercivity(tol); }},
      {7, "parabolic a-priori estimate", [&] { return parabolic(out / "parabolic"); }},
      {8, "transport", [&] { return transport(tol); }},
      {9, "determinism", [&] { return determinism(out / "determinism"); }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << ", " << seconds
              << " s): " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << " of " << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
