#pragma once

#include "anisofrac/assembly.hpp"
#include "anisofrac/core.hpp"
#include "anisofrac/solvers.hpp"
#include "anisofrac/verify.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace anisofrac {

/// Comma-separated table with a header row. Numbers are printed with %.17g so
/// that a value read back is bitwise the value written.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool log_x = false;
  bool log_y = false;
};

/// Self-contained SVG line chart: axes, ticks, one polyline per series, legend.
std::string to_svg(const Chart& chart);
void write_svg(const std::filesystem::path& path, const Chart& chart);

/// Plain-text matrix dump. The first line is a header
/// "# rows cols grid=<id> spec=<hash>", then one row per line.
void export_matrix(const std::filesystem::path& path, const Matrix& m, const std::string& grid_id,
                   std::uint64_t spec_hash);

/// Machine-readable report: name,anchor,grid,spec,tensor,error,tolerance,pass.
std::string reports_to_csv(const std::vector<IdentityReport>& reports);
/// One line per identity plus a closing count.
std::string reports_summary(const std::vector<IdentityReport>& reports);

/// Writes <prefix>_snapshot_NNNN.csv (x, u including the zero constrained nodes),
/// <prefix>_snapshot_NNNN.svg, <prefix>_ledger.csv and <prefix>_history.csv into `dir`.
void write_trajectory(const std::filesystem::path& dir, const std::string& prefix, const Grid& grid,
                      const Trajectory& trajectory);

/// Nodal values over every grid node, constrained nodes set to zero.
CsvTable nodal_table(const Grid& grid, const Vector& coefficients, const std::string& value_name);

}  // namespace anisofrac
