#include "anisofrac/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace anisofrac {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_plain_number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ConfigError("not a finite number: '" + text + "'");
  return v;
}

/// Accepts plain numbers and simple ratios such as 1/32.
double parse_number(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_plain_number(text);
  const double num = parse_plain_number(trim(text.substr(0, slash)));
  const double den = parse_plain_number(trim(text.substr(slash + 1)));
  if (den == 0.0) throw ConfigError("zero denominator in '" + text + "'");
  return num / den;
}

long long parse_integer(const std::string& text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("not an integer: '" + text + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("not an unsigned integer: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError("not a boolean: '" + text + "'");
}

Command parse_command(const std::string& text) {
  static const std::map<std::string, Command> table = {
      {"verify", Command::Verify},           {"solve-elliptic", Command::SolveElliptic},
      {"solve-parabolic", Command::SolveParabolic}, {"solve-transport", Command::SolveTransport},
      {"kernel-table", Command::KernelTable}, {"convergence", Command::Convergence}};
  const auto it = table.find(text);
  if (it == table.end()) throw ConfigError("unknown command '" + text + "'");
  return it->second;
}

std::vector<int> parse_grid_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_integer(trim(item))));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

void add_field_keys(std::map<std::string, Setter>& keys, const std::string& section, FieldChoice RunConfig::*member,
                    const std::string& id_key) {
  keys[section + "." + id_key] = [member](RunConfig& c, const std::string& v) { (c.*member).id = v; };
  auto number_key = [&](const std::string& name, double FieldChoice::*field) {
    keys[section + "." + name] = [member, field](RunConfig& c, const std::string& v) {
      (c.*member).*field = parse_number(v);
    };
  };
  number_key("value", &FieldChoice::value);
  number_key("mean", &FieldChoice::mean);
  number_key("amplitude", &FieldChoice::amplitude);
  number_key("radius", &FieldChoice::radius);
  number_key("center", &FieldChoice::center);
  number_key("sigma", &FieldChoice::sigma);
  number_key("cut", &FieldChoice::cut);
}

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> k;
    k["run.command"] = [](RunConfig& c, const std::string& v) { c.command = parse_command(v); };
    k["run.seed"] = [](RunConfig& c, const std::string& v) { c.seed = parse_unsigned(v); };
    k["run.serial"] = [](RunConfig& c, const std::string& v) { c.serial = parse_bool(v); };

    k["domain.a"] = [](RunConfig& c, const std::string& v) { c.a = parse_number(v); };
    k["domain.b"] = [](RunConfig& c, const std::string& v) { c.b = parse_number(v); };
    k["domain.h"] = [](RunConfig& c, const std::string& v) { c.h = parse_number(v); };
    k["domain.collar"] = [](RunConfig& c, const std::string& v) { c.collar = parse_number(v); };

    k["kernel.n"] = [](RunConfig& c, const std::string& v) { c.n = static_cast<int>(parse_integer(v)); };
    k["kernel.s"] = [](RunConfig& c, const std::string& v) { c.s = parse_number(v); };
    k["kernel.r_inner"] = [](RunConfig& c, const std::string& v) { c.r_inner = parse_number(v); };
    k["kernel.r_outer"] = [](RunConfig& c, const std::string& v) { c.r_outer = parse_number(v); };
    k["kernel.pairs"] = [](RunConfig& c, const std::string& v) { c.kernel_pairs = static_cast<int>(parse_integer(v)); };

    add_field_keys(k, "tensor", &RunConfig::tensor, "field");
    add_field_keys(k, "forcing", &RunConfig::forcing, "id");
    add_field_keys(k, "initial", &RunConfig::initial, "id");

    k["transport.speed"] = [](RunConfig& c, const std::string& v) { c.speed = parse_number(v); };

    k["time.t_end"] = [](RunConfig& c, const std::string& v) { c.time.t_end = parse_number(v); };
    k["time.dt"] = [](RunConfig& c, const std::string& v) { c.time.dt = parse_number(v); };
    k["time.theta"] = [](RunConfig& c, const std::string& v) { c.time.theta = parse_number(v); };
    k["time.stride"] = [](RunConfig& c, const std::string& v) { c.time.stride = static_cast<int>(parse_integer(v)); };

    k["quadrature.panels"] = [](RunConfig& c, const std::string& v) {
      c.budget.panels_per_annulus = static_cast<int>(parse_integer(v));
    };
    k["quadrature.levels"] = [](RunConfig& c, const std::string& v) {
      c.budget.refinement_levels = static_cast<int>(parse_integer(v));
    };
    k["quadrature.tolerance"] = [](RunConfig& c, const std::string& v) { c.budget.tolerance = parse_number(v); };
    k["quadrature.base_order"] = [](RunConfig& c, const std::string& v) {
      c.budget.base_order = static_cast<int>(parse_integer(v));
    };

    k["output.dir"] = [](RunConfig& c, const std::string& v) { c.output_dir = v; };
    k["output.matrices"] = [](RunConfig& c, const std::string& v) { c.export_matrices = parse_bool(v); };

    auto tol = [&k](const std::string& name, double Tolerances::*field) {
      k["verify." + name] = [field](RunConfig& c, const std::string& v) { c.tolerances.*field = parse_number(v); };
    };
    tol("operator_equivalence", &Tolerances::operator_equivalence);
    tol("kernel_ratio", &Tolerances::kernel_ratio);
    tol("kernel_symmetry", &Tolerances::kernel_symmetry);
    tol("kernel_bracket", &Tolerances::kernel_bracket);
    tol("variational", &Tolerances::variational);
    tol("norm_equivalence", &Tolerances::norm_equivalence);
    tol("rayleigh_slack", &Tolerances::rayleigh_slack);
    tol("weight_routes", &Tolerances::weight_routes);
    tol("green", &Tolerances::green);
    tol("green_refinement", &Tolerances::green_refinement);
    tol("advection_skew", &Tolerances::advection_skew);
    tol("ledger_slack", &Tolerances::ledger_slack);
    tol("convergence_order", &Tolerances::convergence_order);

    k["convergence.problem"] = [](RunConfig& c, const std::string& v) { c.convergence_problem = v; };
    k["convergence.grids"] = [](RunConfig& c, const std::string& v) { c.convergence_grids = parse_grid_list(v); };
    return k;
  }();
  return table;
}

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0)) invalid(field, "must be positive");
}

void validate_tensor(const FieldChoice& t) {
  if (t.id == "identity") return;
  if (t.id == "constant") {
    require_positive(t.value, "tensor.value");
    return;
  }
  if (t.id == "sine") {
    if (!(t.mean - std::abs(t.amplitude) > 0.0)) invalid("tensor.amplitude", "mean - |amplitude| must be positive");
    return;
  }
  invalid("tensor.field", "unknown tensor field '" + t.id + "' (identity, constant, sine)");
}

void validate_scalar(const FieldChoice& f, const std::string& section) {
  if (f.id == "zero" || f.id == "constant" || f.id == "getoor") return;
  if (f.id == "bump") {
    require_positive(f.radius, section + ".radius");
    return;
  }
  if (f.id == "gaussian") {
    require_positive(f.sigma, section + ".sigma");
    require_positive(f.cut, section + ".cut");
    return;
  }
  invalid(section + ".id", "unknown field '" + f.id + "' (zero, constant, bump, gaussian, getoor)");
}

std::vector<std::string> required_keys(Command c) {
  switch (c) {
    case Command::Verify: return {};
    case Command::SolveElliptic: return {"domain.h", "kernel.s", "tensor.field", "forcing.id"};
    case Command::SolveParabolic:
      return {"domain.h", "kernel.s", "tensor.field", "forcing.id", "initial.id", "time.t_end", "time.dt"};
    case Command::SolveTransport:
      return {"domain.h", "kernel.s", "initial.id", "transport.speed", "time.t_end", "time.dt"};
    case Command::KernelTable: return {"kernel.s"};
    case Command::Convergence: return {"kernel.s"};
  }
  return {};
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::Verify: return "verify";
    case Command::SolveElliptic: return "solve-elliptic";
    case Command::SolveParabolic: return "solve-parabolic";
    case Command::SolveTransport: return "solve-transport";
    case Command::KernelTable: return "kernel-table";
    case Command::Convergence: return "convergence";
  }
  return "?";
}

void validate(const RunConfig& c) {
  if (c.n != 1) invalid("n", "the discretization is one-dimensional, so n must be 1");
  if (!(c.s > 0.0 && c.s < 1.0)) invalid("s", "must lie in (0, 1)");
  if (c.command == Command::SolveTransport && !(c.s >= 0.5))
    invalid("s", "solve-transport requires fractional order s in [0.5, 1); the advection term is not controlled by "
                 "the energy norm for s < 0.5");
  if (!(c.a < c.b)) invalid("domain.a", "must be smaller than domain.b");
  require_positive(c.h, "domain.h");
  if (c.h > c.b - c.a) invalid("domain.h", "must not exceed the domain length");
  if (!(c.collar >= c.h)) invalid("domain.collar", "must be at least domain.h");
  require_positive(c.r_inner, "kernel.r_inner");
  if (!(c.r_outer > c.r_inner)) invalid("kernel.r_outer", "must exceed kernel.r_inner");
  if (c.kernel_pairs < 1) invalid("kernel.pairs", "must be at least 1");

  validate_tensor(c.tensor);
  validate_scalar(c.forcing, "forcing");
  validate_scalar(c.initial, "initial");

  require_positive(c.time.t_end, "time.t_end");
  require_positive(c.time.dt, "time.dt");
  if (!(c.time.theta >= 0.0 && c.time.theta <= 1.0)) invalid("time.theta", "must lie in [0, 1]");
  if (c.time.stride < 1) invalid("time.stride", "must be at least 1");

  if (c.budget.panels_per_annulus < 1) invalid("quadrature.panels", "must be at least 1");
  if (c.budget.refinement_levels < 1) invalid("quadrature.levels", "must be at least 1");
  require_positive(c.budget.tolerance, "quadrature.tolerance");
  if (c.budget.base_order < 2) invalid("quadrature.base_order", "must be at least 2");

  const Tolerances& t = c.tolerances;
  for (double v : {t.operator_equivalence, t.kernel_ratio, t.kernel_symmetry, t.kernel_bracket, t.variational,
                   t.norm_equivalence, t.rayleigh_slack, t.weight_routes, t.green, t.green_refinement,
                   t.advection_skew, t.ledger_slack, t.convergence_order})
    if (!(v >= 0.0)) invalid("verify", "tolerances must be non-negative");

  if (c.convergence_problem != "getoor" && c.convergence_problem != "zero-load")
    invalid("convergence.problem", "must be getoor or zero-load");
  if (c.convergence_grids.empty()) invalid("convergence.grids", "must list at least one mesh count");
  for (std::size_t k = 0; k < c.convergence_grids.size(); ++k) {
    if (c.convergence_grids[k] < 2) invalid("convergence.grids", "mesh counts must be at least 2");
    if (k > 0 && c.convergence_grids[k] <= c.convergence_grids[k - 1])
      invalid("convergence.grids", "mesh counts must increase");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> sections = {"run",  "domain",     "kernel", "tensor",  "forcing",
                                                     "initial", "transport", "time",   "quadrature", "output",
                                                     "verify", "convergence"};
      if (!sections.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(where + "key '" + key + "' appears before any section");
    const std::string full = section + "." + key;
    const auto& table = key_table();
    const auto it = table.find(full);
    if (it == table.end()) throw ConfigError(where + "unknown key '" + key + "' in section [" + section + "]");
    if (!seen.insert(full).second) throw ConfigError(where + "duplicate key '" + full + "'");
    if (value.empty()) throw ConfigError(where + "empty value for '" + full + "'");
    try {
      it->second(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + full + ": " + e.what());
    }
  }
  for (const std::string& key : required_keys(config.command))
    if (!seen.count(key)) invalid(key, "required by command " + command_name(config.command));
  validate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace anisofrac
