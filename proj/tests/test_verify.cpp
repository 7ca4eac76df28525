#include "anisofrac/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <string>

using namespace anisofrac;

static_assert(registry_covers_all_anchors());

namespace {

const QuadratureBudget budget{};

Trajectory history(std::vector<double> l2, std::vector<double> mass, std::vector<double> centre) {
  Trajectory t;
  t.l2_history = std::move(l2);
  t.mass_history = std::move(mass);
  t.center_history = std::move(centre);
  return t;
}

}  // namespace

TEST_CASE("registry") {
  std::set<std::string_view> names;
  for (const RegisteredCheck& c : check_registry) names.insert(c.name);
  CHECK(names.size() == check_registry.size());
  CHECK(registered_anchor("green-identity") == "anisotropic-green-identity");
  CHECK(registered_anchor("transport-plume") == "transport-coercivity");
  CHECK_THROWS_AS(registered_anchor("no-such-check"), DomainError);
  CHECK(anchor_name(Anchor::APrioriEstimate) == "a-priori-estimate");
}

TEST_CASE("report pass flag") {
  CHECK(make_report("x", "y", 1e-3, 1e-3).pass);
  CHECK_FALSE(make_report("x", "y", 2e-3, 1e-3).pass);
  CHECK_FALSE(make_report("x", "y", std::numeric_limits<double>::quiet_NaN(), 1.0).pass);
  CHECK_FALSE(make_report("x", "y", std::numeric_limits<double>::infinity(), 1.0).pass);
  CHECK(make_report("x", "y", 0.0, 0.0).pass);
}

TEST_CASE("decay, plume and ledger checks on synthetic histories") {
  CHECK(check_parabolic_decay(history({3.0, 2.0, 1.0}, {}, {}), "parabolic-decay").pass);
  const IdentityReport bump = check_parabolic_decay(history({4.0, 2.0, 3.0}, {}, {}), "parabolic-decay");
  CHECK_FALSE(bump.pass);
  CHECK(bump.error == doctest::Approx(0.25));

  CHECK(check_transport_plume(history({}, {1.0, 0.9, 0.8}, {0.0, 0.1, 0.3}), 1.0).pass);
  CHECK_FALSE(check_transport_plume(history({}, {1.0, 0.9, 0.8}, {0.0, 0.1, 0.3}), -1.0).pass);
  const IdentityReport stalled = check_transport_plume(history({}, {1.0, 1.0}, {0.2, 0.2}), 1.0);
  CHECK_FALSE(stalled.pass);
  CHECK(stalled.error > 0.0);
  const IdentityReport growing = check_transport_plume(history({}, {1.0, 1.5}, {0.0, 0.1}), 1.0);
  CHECK(growing.error == doctest::Approx(0.5));
  CHECK_FALSE(check_transport_plume(history({}, {1.0}, {0.0}), 1.0).pass);

  Trajectory t;
  t.ledger.entries = {{0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0}, {0.1, 0.9, 0.15, 0.0, 1.05, 1.0, 1.0}};
  CHECK(t.ledger.worst_excess() == doctest::Approx(0.05));
  CHECK(check_a_priori(t, "a-priori-unforced", 0.06).pass);
  CHECK_FALSE(check_a_priori(t, "a-priori-unforced", 0.04).pass);
}

TEST_CASE("convergence check on synthetic tables") {
  ConvergenceTable table{"getoor", {{0.25, 7, 0.2, std::nan(""), 0.9}, {0.125, 15, 0.1, 1.0, 0.99}}};
  CHECK(check_convergence(table, 0.5, 2e-2).pass);
  CHECK_FALSE(check_convergence(table, 1.5, 2e-2).pass);
  CHECK(check_convergence(table, 1.5, 2e-2).error == doctest::Approx(0.5));
  table.rows[1].center_value = 0.9;
  CHECK(check_convergence(table, 0.5, 2e-2).error == doctest::Approx(0.08));
  table.rows[1].l2_error = 0.3;
  CHECK(std::isinf(check_convergence(table, 0.5, 2e-2).error));
}

TEST_CASE("zero-load convergence study is exact") {
  const ConvergenceTable table = run_convergence_study("zero-load", 0.5, {4, 8}, budget);
  REQUIRE(table.rows.size() == 2);
  for (const ConvergenceRow& r : table.rows) CHECK(r.l2_error == 0.0);
  CHECK(table.rows[0].dofs == 7);
  CHECK_THROWS_AS(run_convergence_study("nope", 0.5, {4}, budget), DomainError);
}

TEST_CASE("Getoor convergence study") {
  const ConvergenceTable table = run_convergence_study("getoor", 0.5, {8, 16, 32}, budget);
  CHECK(table.strictly_decreasing());
  CHECK(table.last_order() > 0.4);
}

TEST_CASE("Green identity pieces") {
  const Grid grid = build_grid(-1.0, 1.0, 0.25, 1.0);
  const DiscreteSystem sys =
      build_system(grid, KernelSpec::fractional(1, 0.5), sine_tensor(1), zero_field(1), SystemOptions{});
  const GreenData data{grid.id(), Vector::Constant(grid.dof_count(), 1.0), Vector::Constant(grid.dof_count(), -1.0)};
  CHECK(green_defect(data, Vector::Zero(grid.dof_count())) == 0.0);
  CHECK(green_defect(data, Vector::Constant(grid.dof_count(), 2.0)) == 0.0);
  const DiscreteFunction other{build_grid(-1.0, 1.0, 0.5, 1.0).id(), Vector::Zero(3)};
  CHECK_THROWS_AS(check_green_identity(sys, data, other, 1e-2), DomainError);
}

TEST_CASE("random test functions are reproducible") {
  const Grid grid = build_grid(-1.0, 1.0, 0.125, 0.5);
  CHECK(random_smooth_function(grid, 4, 9).coefficients == random_smooth_function(grid, 4, 9).coefficients);
  CHECK(random_smooth_function(grid, 4, 9).coefficients != random_smooth_function(grid, 4, 10).coefficients);
  CHECK(random_coefficients(5, 3) == random_coefficients(5, 3));
  const auto pairs = separated_pairs_1d(50, 4);
  CHECK(pairs == separated_pairs_1d(50, 4));
  for (const auto& [x, z] : pairs) {
    const double d = (x - z).norm();
    CHECK(d >= 0.25);
    CHECK(d <= 4.0);
  }
}

TEST_CASE("variational and norm equivalence on a small identity system") {
  const Grid grid = build_grid(-1.0, 1.0, 0.125, 1.0);
  const DiscreteSystem sys =
      build_system(grid, KernelSpec::fractional(1, 0.5), identity_tensor(1), zero_field(1), SystemOptions{});
  CHECK(check_variational_equivalence(sys, 1e-5).pass);
  CHECK(check_norm_equivalence(sys, 10, 1, 1e-2).pass);
  CHECK(check_coercivity_spectrum(sys, 1e-3).pass);
  CHECK(check_rayleigh_bounds(sys, 10, 1, 1e-3).pass);
}

TEST_CASE("transport coercivity") {
  const Grid grid = build_grid(-1.0, 1.0, 0.125, 1.0);
  const VelocityField v = constant_velocity(1, 0.7);
  const DiscreteSystem sys =
      build_system(grid, KernelSpec::fractional(1, 0.6), identity_tensor(1), zero_field(1), SystemOptions{}, &v);
  CHECK(check_transport_coercivity(sys, Tolerances{}).pass);
}

TEST_CASE("operator equivalence at a few points") {
  const IdentityReport r = check_operator_equivalence(KernelSpec::fractional(1, 0.5), smooth_bump(1, 1.0),
                                                      {point1(-0.3), point1(0.4)}, budget, 1e-6);
  CHECK(r.pass);
  CHECK(r.anchor == "fractional-identification");
}

TEST_CASE("kernel bounds scan") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  const auto pairs = separated_pairs_1d(6, 2);
  const KernelBoundsReport iso = scan_kernel_bounds(spec, identity_tensor(1), pairs, budget);
  CHECK(iso.all_positive);
  CHECK(iso.near_ratios.size() + iso.far_ratios.size() == pairs.size());
  for (double r : iso.far_ratios) CHECK(r == doctest::Approx(0.5 * spec.c_ns).epsilon(1e-5));
}

TEST_CASE("weight routes agree") {
  const KernelSpec spec = KernelSpec::fractional(1, 0.5);
  CHECK(check_weight_routes(spec, sine_tensor(1), smooth_bump(1, 1.0), {point1(0.1)}, budget, 1e-6).pass);
}
