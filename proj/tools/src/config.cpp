#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "fracnls/errors.hpp"
#include "fracnls_app/app.hpp"

namespace fracnls::app {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

const json& object_at(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_object()) throw ConfigError(where + "." + key + " must be an object");
  return v;
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& where, double fallback) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::int64_t integer(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

std::string text(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

bool boolean(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + " must be true or false");
  return v.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + "." + key + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

NonlinearitySpec parse_nonlinearity(const json& j) {
  NonlinearitySpec s;
  reject_unknown(j, "nonlinearity", {"kind", "p", "p0", "theta", "table"});
  if (j.contains("kind")) s.kind = text(j, "kind", "nonlinearity");
  if (s.kind == "power") {
    s.p = number_or(j, "p", "nonlinearity", 3.0);
    s.p0 = number_or(j, "p0", "nonlinearity", s.p + 0.5);
    if (j.contains("theta")) s.theta = number(j, "theta", "nonlinearity");
    if (j.contains("table")) throw ConfigError("nonlinearity.table is only valid with kind \"table\"");
  } else if (s.kind == "table") {
    const json& t = object_at(j, "table", "nonlinearity");
    reject_unknown(t, "nonlinearity.table", {"xi", "f", "df"});
    s.xi = numbers(t, "xi", "nonlinearity.table");
    s.f = numbers(t, "f", "nonlinearity.table");
    s.df = numbers(t, "df", "nonlinearity.table");
    s.theta = number(j, "theta", "nonlinearity");
    s.p0 = number(j, "p0", "nonlinearity");
    if (j.contains("p")) throw ConfigError("nonlinearity.p is only valid with kind \"power\"");
  } else {
    throw ConfigError("nonlinearity.kind must be \"power\" or \"table\", got \"" + s.kind + "\"");
  }
  return s;
}

PotentialSpec parse_potential(const json& j) {
  PotentialSpec s;
  reject_unknown(j, "potential", {"expr", "table", "V0", "Vinf", "flags"});
  if (j.contains("expr") == j.contains("table")) {
    throw ConfigError("potential needs exactly one of 'expr' or 'table'");
  }
  if (j.contains("expr")) {
    s.expr = text(j, "expr", "potential");
  } else {
    const json& t = object_at(j, "table", "potential");
    reject_unknown(t, "potential.table", {"t", "v"});
    s.t = numbers(t, "t", "potential.table");
    s.v = numbers(t, "v", "potential.table");
    s.expr.clear();
  }
  s.V0 = number(j, "V0", "potential");
  s.V_inf = number(j, "Vinf", "potential");
  s.flags = {false, false};
  if (j.contains("flags")) {
    const json& f = object_at(j, "flags", "potential");
    reject_unknown(f, "potential.flags", {"radial_increasing", "below_Vinf"});
    if (f.contains("radial_increasing")) s.flags.radial_increasing = boolean(f, "radial_increasing", "potential.flags");
    if (f.contains("below_Vinf")) s.flags.below_Vinf = boolean(f, "below_Vinf", "potential.flags");
  }
  return s;
}

SolverSpec parse_solver(const json& j) {
  SolverSpec s;
  reject_unknown(j, "solver", {"max_iters", "grad_tol", "step_rule", "tau", "beta", "c1", "seed", "start"});
  if (j.contains("max_iters")) s.max_iters = static_cast<int>(integer(j, "max_iters", "solver"));
  s.grad_tol = number_or(j, "grad_tol", "solver", s.grad_tol);
  if (j.contains("step_rule")) s.step_rule = text(j, "step_rule", "solver");
  if (s.step_rule != "backtracking" && s.step_rule != "fixed") {
    throw ConfigError("solver.step_rule must be \"backtracking\" or \"fixed\"");
  }
  s.tau = number_or(j, "tau", "solver", s.tau);
  s.beta = number_or(j, "beta", "solver", s.beta);
  s.c1 = number_or(j, "c1", "solver", s.c1);
  if (j.contains("seed")) {
    const auto seed = integer(j, "seed", "solver");
    if (seed < 0) throw ConfigError("solver.seed must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (j.contains("start")) {
    const json& st = j.at("start");
    if (st.is_string()) {
      s.start = st.get<std::string>();
    } else if (st.is_object()) {
      reject_unknown(st, "solver.start", {"kind", "center", "width"});
      if (st.contains("kind")) s.start = text(st, "kind", "solver.start");
      s.center = number_or(st, "center", "solver.start", s.center);
      s.width = number_or(st, "width", "solver.start", s.width);
    } else {
      throw ConfigError("solver.start must be a string or an object");
    }
    if (s.start != "gaussian" && s.start != "random") {
      throw ConfigError("solver.start kind must be \"gaussian\" or \"random\"");
    }
  }
  return s;
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, "config", {"tag", "alpha", "L", "N", "nonlinearity", "potential", "solver", "sweep"});
  RunConfig cfg;
  cfg.source = j;
  if (j.contains("tag")) cfg.tag = text(j, "tag", "config");
  if (cfg.tag.empty() || cfg.tag.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("config.tag must be a nonempty file-name-safe string");
  }
  cfg.alpha = number(j, "alpha", "config");
  cfg.L = number(j, "L", "config");
  const auto n = integer(j, "N", "config");
  if (n <= 0) throw ConfigError("config.N must be positive");
  cfg.N = static_cast<std::size_t>(n);
  if (j.contains("nonlinearity")) cfg.nonlinearity = parse_nonlinearity(object_at(j, "nonlinearity", "config"));
  if (j.contains("potential")) cfg.potential = parse_potential(object_at(j, "potential", "config"));
  if (j.contains("solver")) cfg.solver = parse_solver(object_at(j, "solver", "config"));
  if (j.contains("sweep")) {
    const json& s = object_at(j, "sweep", "config");
    reject_unknown(s, "sweep", {"parameter", "values"});
    cfg.sweep = SweepSpec{text(s, "parameter", "sweep"), numbers(s, "values", "sweep")};
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Problem build_problem(const RunConfig& cfg) {
  const FractionalOrder alpha(cfg.alpha);
  if (!(cfg.L > 0.0) || !std::isfinite(cfg.L)) throw ConfigError("config.L must be positive");
  const Grid grid(cfg.L, cfg.N);

  const auto& ns = cfg.nonlinearity;
  const Nonlinearity f = ns.kind == "power"
                             ? (ns.theta ? Nonlinearity::power(ns.p, ns.p0, *ns.theta) : Nonlinearity::power(ns.p, ns.p0))
                             : Nonlinearity::tabulated(ns.xi, ns.f, ns.df, *ns.theta, ns.p0);

  const auto& ps = cfg.potential;
  Potential V = ps.t.empty() ? Potential::from_expression(ps.expr, ps.V0, ps.V_inf, ps.flags)
                             : Potential::from_table(ps.t, ps.v, ps.V0, ps.V_inf, ps.flags);
  if (ps.shift != 0.0) V = V.shifted(ps.shift);

  Problem prob(alpha, grid, f, V);
  prob.validate();
  return prob;
}

SolverConfig build_solver(const RunConfig& cfg, const Grid& grid) {
  const auto& s = cfg.solver;
  SolverConfig out;
  out.max_iters = s.max_iters;
  out.grad_tol = s.grad_tol;
  if (s.step_rule == "fixed") {
    out.step_rule = FixedStep{s.tau};
  } else {
    out.step_rule = Backtracking{s.beta, s.c1};
  }
  out.seed = s.seed;
  if (s.start == "random") {
    out.start = CustomStart{random_starts(grid, 1, s.seed).front()};
  } else {
    out.start = GaussianBump{s.center, s.width};
  }
  out.check();
  return out;
}

RunConfig with_parameter(const RunConfig& cfg, const std::string& parameter, double value) {
  RunConfig c = cfg;
  if (parameter == "epsilon") {
    c.potential.shift = value;
  } else if (parameter == "alpha") {
    c.alpha = value;
  } else if (parameter == "p") {
    // p0 keeps its offset from p so the growth window moves along.
    c.nonlinearity.p0 = value + (cfg.nonlinearity.p0 - cfg.nonlinearity.p);
    c.nonlinearity.p = value;
    c.nonlinearity.theta.reset();
    if (cfg.nonlinearity.kind != "power") throw ConfigError("sweeping p needs a power nonlinearity");
  } else if (parameter == "L") {
    c.L = value;
  } else if (parameter == "N") {
    if (value != std::floor(value) || value <= 0.0) throw ConfigError("N sweep values must be positive integers");
    c.N = static_cast<std::size_t>(value);
  } else if (parameter == "Vinf") {
    // A constant potential (V0 == Vinf) is replaced as a whole.
    if (cfg.potential.t.empty() && cfg.potential.V0 == cfg.potential.V_inf) {
      std::ostringstream os;
      os.precision(17);
      os << value;
      c.potential.expr = os.str();
      c.potential.V0 = value;
    }
    c.potential.V_inf = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "' (epsilon, alpha, p, L, N, Vinf)");
  }
  return c;
}

}  // namespace fracnls::app
