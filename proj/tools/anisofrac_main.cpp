#include "anisofrac/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic weighted nonlocal operators: solvers and identity checks"};
  std::string config_path;
  std::string out_dir;
  bool serial = false;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Run configuration (sectioned key = value file)")->required();
  app.add_option("--out", out_dir, "Output directory, overrides [output] dir");
  app.add_flag("--serial", serial, "Force serial execution for bit-reproducible output");
  app.add_option("--seed", seed, "Seed for random test vectors, overrides [run] seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? anisofrac::exit_ok : anisofrac::exit_config_error;
  }

  anisofrac::RunConfig config;
  try {
    config = anisofrac::load_config(config_path);
  } catch (const anisofrac::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return anisofrac::exit_config_error;
  }
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (serial) config.serial = true;
  if (seed) config.seed = *seed;
  return anisofrac::run(config, std::cout);
}
