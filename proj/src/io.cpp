#include "anisofrac/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace anisofrac {

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = log ? std::log10(v) : v;
    return (t - a) / (b - a);
  }
};

Axis fit_axis(const std::vector<Series>& series, bool use_x, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Series& s : series)
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!std::isfinite(lo)) {
    lo = log ? 1.0 : 0.0;
    hi = log ? 10.0 : 1.0;
  }
  if (hi == lo) {
    const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
    lo = log ? lo / 2.0 : lo - pad;
    hi = log ? hi * 2.0 : hi + pad;
  }
  return {lo, hi, log};
}

const char* palette(std::size_t k) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};
  return colors[k % (sizeof colors / sizeof *colors)];
}

}  // namespace

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t k = 0; k < table.header.size(); ++k) out += (k ? "," : "") + csv_field(table.header[k]);
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw DomainError("to_csv: row length differs from header");
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + number(row[k]);
    out += "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_text(path, to_csv(table)); }

std::string to_svg(const Chart& chart) {
  constexpr double width = 640.0;
  constexpr double height = 420.0;
  constexpr double left = 70.0;
  constexpr double right = 20.0;
  constexpr double top = 40.0;
  constexpr double bottom = 55.0;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  const Axis ax = fit_axis(chart.series, true, chart.log_x);
  const Axis ay = fit_axis(chart.series, false, chart.log_y);
  auto px = [&](double v) { return left + pw * ax.map(v); };
  auto py = [&](double v) { return top + ph * (1.0 - ay.map(v)); };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(chart.title)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0;
    const double xv = ax.log ? std::pow(10.0, std::log10(ax.lo) + f * (std::log10(ax.hi) - std::log10(ax.lo)))
                             : ax.lo + f * (ax.hi - ax.lo);
    const double yv = ay.log ? std::pow(10.0, std::log10(ay.lo) + f * (std::log10(ay.hi) - std::log10(ay.lo)))
                             : ay.lo + f * (ay.hi - ay.lo);
    const double gx = left + f * pw;
    const double gy = top + (1.0 - f) * ph;
    os << "<line x1=\"" << gx << "\" y1=\"" << top + ph << "\" x2=\"" << gx << "\" y2=\"" << top + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << gx << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << short_number(xv)
       << "</text>\n";
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << gy << "\" x2=\"" << left << "\" y2=\"" << gy
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">" << short_number(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
     << escape_xml(chart.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << top + ph / 2 << ")\">" << escape_xml(chart.y_label) << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const Series& s = chart.series[k];
    os << "<polyline fill=\"none\" stroke=\"" << palette(k) << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((ax.log && s.x[i] <= 0.0) || (ay.log && s.y[i] <= 0.0)) continue;
      os << (first ? "" : " ") << px(s.x[i]) << "," << py(s.y[i]);
      first = false;
    }
    os << "\"/>\n";
    const double ly = top + 14.0 + 16.0 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw - 120 << "\" y1=\"" << ly << "\" x2=\"" << left + pw - 100 << "\" y2=\"" << ly
       << "\" stroke=\"" << palette(k) << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw - 95 << "\" y=\"" << ly + 4 << "\">" << escape_xml(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::filesystem::path& path, const Chart& chart) { write_text(path, to_svg(chart)); }

void export_matrix(const std::filesystem::path& path, const Matrix& m, const std::string& grid_id,
                   std::uint64_t spec_hash) {
  std::string out = "# " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " grid=" + grid_id +
                    " spec=" + std::to_string(spec_hash) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += (j ? " " : "") + number(m(i, j));
    out += "\n";
  }
  write_text(path, out);
}

std::string reports_to_csv(const std::vector<IdentityReport>& reports) {
  std::string out = "name,anchor,grid,spec,tensor,error [1],tolerance [1],pass\n";
  for (const IdentityReport& r : reports) {
    out += csv_field(r.name) + "," + csv_field(r.anchor) + "," + csv_field(r.grid_id) + "," + csv_field(r.spec_id) +
           "," + csv_field(r.tensor_id) + "," + number(r.error) + "," + number(r.tolerance) + "," +
           (r.pass ? "1" : "0") + "\n";
  }
  return out;
}

std::string reports_summary(const std::vector<IdentityReport>& reports) {
  std::ostringstream os;
  int passed = 0;
  for (const IdentityReport& r : reports) {
    os << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(30) << r.name << " [" << r.anchor << "] error "
       << std::scientific << std::setprecision(3) << r.error << " tolerance " << r.tolerance << "\n";
    os.unsetf(std::ios::floatfield);
    passed += r.pass ? 1 : 0;
  }
  os << passed << " of " << reports.size() << " identities passed\n";
  return os.str();
}

CsvTable nodal_table(const Grid& grid, const Vector& coefficients, const std::string& value_name) {
  if (coefficients.size() != grid.dof_count()) throw DomainError("nodal_table: coefficient length mismatch");
  CsvTable t;
  t.header = {"x [length]", value_name};
  for (int k = 0; k < grid.node_count(); ++k) {
    const int d = grid.dof_of_node[k];
    t.rows.push_back({grid.nodes[k], d >= 0 ? coefficients[d] : 0.0});
  }
  return t;
}

void write_trajectory(const std::filesystem::path& dir, const std::string& prefix, const Grid& grid,
                      const Trajectory& trajectory) {
  for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
    const Snapshot& snap = trajectory.snapshots[k];
    char tag[16];
    std::snprintf(tag, sizeof tag, "%04zu", k);
    const CsvTable table = nodal_table(grid, snap.u, "u [1]");
    write_csv(dir / (prefix + "_snapshot_" + tag + ".csv"), table);
    Chart chart;
    chart.title = prefix + " at t = " + short_number(snap.t);
    chart.x_label = "x";
    chart.y_label = "u";
    Series s{"u", {}, {}};
    for (const auto& row : table.rows) {
      s.x.push_back(row[0]);
      s.y.push_back(row[1]);
    }
    chart.series.push_back(std::move(s));
    write_svg(dir / (prefix + "_snapshot_" + tag + ".svg"), chart);
  }

  const EnergyLedger& ledger = trajectory.ledger;
  CsvTable lt;
  lt.header = {"t [time]",   "l2 [1]",  "energy [1]",        "forcing [1]",
               "lhs [1]",    "rhs [1]", "rhs_standard [1]",  "c_coer [1]",
               "c_cont [1]", "c_p [length^s]"};
  for (const LedgerEntry& e : ledger.entries)
    lt.rows.push_back({e.t, e.l2, e.energy, e.forcing, e.lhs, e.rhs, e.rhs_standard, ledger.c_coer, ledger.c_cont,
                       ledger.c_p});
  write_csv(dir / (prefix + "_ledger.csv"), lt);

  CsvTable ht;
  ht.header = {"step [1]", "l2 [1]", "mass [1]", "center [length]"};
  for (std::size_t k = 0; k < trajectory.l2_history.size(); ++k)
    ht.rows.push_back({static_cast<double>(k), trajectory.l2_history[k], trajectory.mass_history[k],
                       trajectory.center_history[k]});
  write_csv(dir / (prefix + "_history.csv"), ht);

  Chart lc;
  lc.title = prefix + " energy ledger";
  lc.x_label = "t";
  lc.y_label = "value";
  Series lhs{"lhs", {}, {}};
  Series rhs{"rhs", {}, {}};
  for (const LedgerEntry& e : ledger.entries) {
    lhs.x.push_back(e.t);
    lhs.y.push_back(e.lhs);
    rhs.x.push_back(e.t);
    rhs.y.push_back(e.rhs);
  }
  lc.series = {lhs, rhs};
  write_svg(dir / (prefix + "_ledger.svg"), lc);
}

}  // namespace anisofrac
