#pragma once

#include "anisofrac/core.hpp"
#include "anisofrac/quadrature.hpp"
#include "anisofrac/solvers.hpp"
#include "anisofrac/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace anisofrac {

enum class Command { Verify, SolveElliptic, SolveParabolic, SolveTransport, KernelTable, Convergence };

std::string command_name(Command c);

/// A named field with up to three numeric parameters. Which parameters matter
/// depends on `id`:
///   tensor:  identity | constant(value) | sine(mean, amplitude)
///   scalar:  zero | constant(value) | bump(radius, center, amplitude)
///            | gaussian(sigma, cut, center, amplitude) | getoor
struct FieldChoice {
  std::string id;
  double value = 1.0;
  double mean = 2.0;
  double amplitude = 1.0;
  double radius = 1.0;
  double center = 0.0;
  double sigma = 0.1;
  double cut = 0.4;
};

struct RunConfig {
  Command command = Command::Verify;
  std::uint64_t seed = 12345;
  bool serial = true;

  double a = -1.0;
  double b = 1.0;
  double h = 1.0 / 32.0;
  double collar = 2.0;

  int n = 1;
  double s = 0.5;
  double r_inner = 1e-3;
  double r_outer = 50.0;

  FieldChoice tensor{"identity"};
  FieldChoice forcing{"zero"};
  FieldChoice initial{"zero"};
  double speed = 0.0;

  TimeSteppingConfig time;
  QuadratureBudget budget;
  Tolerances tolerances;

  std::filesystem::path output_dir = "out";
  bool export_matrices = false;

  std::string convergence_problem = "getoor";
  std::vector<int> convergence_grids = {16, 32, 64, 128};
  int kernel_pairs = 10;

  Execution execution() const { return serial ? Execution::Serial : Execution::Parallel; }
};

/// Parses the sectioned key = value format:
///
///   # comment
///   [run]
///   command = solve-elliptic
///   [kernel]
///   s = 0.5
///
/// Keys outside a section, unknown sections or keys, duplicates and malformed
/// values raise ConfigError with the line number; failed range checks raise
/// ConfigError naming the field.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::filesystem::path& path);

/// Range and consistency checks, also applied by parse_config. Throws ConfigError.
void validate(const RunConfig& config);

}  // namespace anisofrac
