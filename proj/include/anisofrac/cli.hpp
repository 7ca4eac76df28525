#pragma once

#include "anisofrac/config.hpp"
#include "anisofrac/fields.hpp"
#include "anisofrac/tensor_field.hpp"

#include <iosfwd>

namespace anisofrac {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_numerical_failure = 3,
  exit_check_failure = 4,
};

/// Builds the tensor field named in the config.
DiffusionTensorField make_tensor(const FieldChoice& choice, int n);

/// Builds a scalar field named in the config. `getoor` means the Getoor load
/// for a forcing and the Getoor profile for an initial value.
ScalarField make_scalar(const FieldChoice& choice, int n, double s, bool as_forcing);

/// Runs one command, writes its artifacts under config.output_dir and reports
/// progress on `log`. Never throws: ConfigError maps to exit_config_error,
/// other library or I/O errors to exit_numerical_failure, and a failed
/// identity check to exit_check_failure.
int run(const RunConfig& config, std::ostream& log);

}  // namespace anisofrac
