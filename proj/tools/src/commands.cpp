#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "fracnls/errors.hpp"
#include "fracnls/rearrange.hpp"
#include "fracnls/version.hpp"
#include "fracnls_app/app.hpp"

namespace fracnls::app {
namespace {

namespace fs = std::filesystem;

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
  if (!f) throw ConfigError("write failed for " + path.string());
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_manifest(const fs::path& path, const RunConfig& cfg, const std::string& command,
                    const std::string& started, const std::vector<std::string>& outputs) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["config_digest"] = config_digest(cfg);
  m["seed"] = cfg.solver.seed;
  m["tool_version"] = kVersion;
  m["started_at"] = started;
  m["finished_at"] = utc_now();
  m["outputs"] = outputs;
  write_file(path, m.dump(2) + "\n");
}

RunConfig load_with_overrides(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt.config);
  if (opt.seed) {
    cfg.solver.seed = *opt.seed;
    cfg.source["solver"]["seed"] = *opt.seed;
  }
  return cfg;
}

struct SweepRow {
  std::string status = "failed";
  double c = NAN, c_inf = NAN, residual = NAN, symmetry_defect = NAN;
  double truncation_err = NAN, refinement_drift = NAN;
  int iterations = 0;
  std::string message;
};

SweepRow sweep_point(const RunConfig& base, const std::string& parameter, double value, bool refine) {
  SweepRow row;
  try {
    const RunConfig cfg = with_parameter(base, parameter, value);
    const Problem prob = build_problem(cfg);
    const GroundStateOutcome out = run_ground_state(prob, build_solver(cfg, prob.grid()), refine);
    const auto& r = out.report;
    row.status = r.converged ? "ok" : "not_converged";
    row.c = r.c;
    row.c_inf = r.c_infinity;
    row.residual = r.residual;
    row.symmetry_defect = r.symmetry_defect;
    row.truncation_err = out.truncation_err;
    row.refinement_drift = out.refinement_drift;
    row.iterations = r.iterations;
  } catch (const ConfigError& e) {
    row.status = "invalid";
    row.message = e.what();
  } catch (const std::exception& e) {
    row.status = "failed";
    row.message = e.what();
  }
  return row;
}

}  // namespace

int cmd_ground_state(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  const std::string started = utc_now();
  RunConfig cfg;
  std::optional<Problem> prob;
  SolverConfig solver;
  try {
    cfg = load_with_overrides(opt);
    prob.emplace(build_problem(cfg));
    solver = build_solver(cfg, prob->grid());
    prepare_out_dir(opt.out_dir);
  } catch (const std::exception& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }

  std::optional<GroundStateOutcome> outcome;
  try {
    outcome = run_ground_state(*prob, solver, opt.refine);
  } catch (const PreconditionError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kNotConverged;
  }

  const GroundStateOutcome& result = *outcome;
  const std::string stem = cfg.tag + "_" + shortest(cfg.alpha) + "_" + std::to_string(cfg.N);
  const fs::path json_path = opt.out_dir / (stem + ".json");
  const fs::path csv_path = opt.out_dir / (stem + ".csv");
  try {
    write_file(json_path, report_json(cfg, result).dump(2) + "\n");
    write_file(csv_path, profile_csv(result.report.u));
    write_manifest(opt.out_dir / (stem + ".manifest.json"), cfg, "ground-state", started,
                   {json_path.filename().string(), csv_path.filename().string()});
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kConfigError;
  }

  const auto& r = result.report;
  out << "c = " << g17(r.c) << "  residual = " << g17(r.residual) << "  iterations = " << r.iterations
      << (r.converged ? "  converged" : "  NOT converged") << "\n";
  if (opt.refine) {
    out << "truncation_err = " << g17(result.truncation_err) << "  refinement_drift = "
        << g17(result.refinement_drift) << "\n";
  }
  out << "wrote " << json_path.string() << " and " << csv_path.string() << "\n";
  if (!r.converged) {
    err << "solver did not reach grad_tol " << cfg.solver.grad_tol << " within " << cfg.solver.max_iters
        << " iterations; partial report written\n";
    return kNotConverged;
  }
  return kOk;
}

int cmd_sweep(const CommonOptions& opt, const std::optional<std::string>& parameter,
              const std::optional<std::vector<double>>& values, std::ostream& out, std::ostream& err) {
  const std::string started = utc_now();
  RunConfig cfg;
  SweepSpec spec;
  try {
    cfg = load_with_overrides(opt);
    if (cfg.sweep) spec = *cfg.sweep;
    if (parameter) spec.parameter = *parameter;
    if (values) spec.values = *values;
    if (spec.parameter.empty()) throw ConfigError("no sweep parameter given (config 'sweep' block or --param)");
    if (spec.values.empty()) throw ConfigError("sweep value list is empty");
    with_parameter(cfg, spec.parameter, spec.values.front());  // rejects unknown parameters early
    cfg.sweep = spec;
    cfg.source["sweep"] = {{"parameter", spec.parameter}, {"values", spec.values}};
    prepare_out_dir(opt.out_dir);
  } catch (const std::exception& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }

  std::vector<SweepRow> rows(spec.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i] = sweep_point(cfg, spec.parameter, spec.values[i], opt.refine);
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(rows.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::string csv = "value,status,c,c_inf,residual,symmetry_defect,truncation_err,refinement_drift,iterations\n";
  bool all_ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    csv += g17(spec.values[i]) + "," + r.status + "," + g17(r.c) + "," + g17(r.c_inf) + "," + g17(r.residual) + "," +
           g17(r.symmetry_defect) + "," + g17(r.truncation_err) + "," + g17(r.refinement_drift) + "," +
           std::to_string(r.iterations) + "\n";
    if (r.status != "ok") {
      all_ok = false;
      err << spec.parameter << " = " << g17(spec.values[i]) << ": " << r.status;
      if (!r.message.empty()) err << ": " << r.message;
      err << "\n";
    }
  }

  const std::string stem = cfg.tag + "_sweep_" + spec.parameter;
  const fs::path csv_path = opt.out_dir / (stem + ".csv");
  try {
    write_file(csv_path, csv);
    write_manifest(opt.out_dir / (stem + ".manifest.json"), cfg, "sweep", started, {csv_path.filename().string()});
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kConfigError;
  }
  out << "wrote " << rows.size() << " rows to " << csv_path.string() << "\n";
  return all_ok ? kOk : kNotConverged;
}

int cmd_rearrange(const fs::path& input, const fs::path& output, std::optional<double> alpha, std::ostream& out,
                  std::ostream& err) {
  try {
    std::ifstream in(input);
    if (!in) throw ConfigError("cannot read " + input.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, us;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string a, b;
      if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) {
        throw ConfigError("rows of " + input.string() + " need x,u columns");
      }
      try {
        xs.push_back(std::stod(a));
        us.push_back(std::stod(b));
      } catch (const std::exception&) {
        throw ConfigError("non-numeric row in " + input.string() + ": " + line);
      }
    }
    if (xs.size() < 2) throw ConfigError(input.string() + " holds fewer than two samples");
    const double dx = xs[1] - xs[0];
    const double L = -xs[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (std::abs(xs[i] - (xs[0] + static_cast<double>(i) * dx)) > 1e-9 * std::max(1.0, L)) {
        throw ConfigError("x column is not uniformly spaced");
      }
    }
    if (std::abs(2.0 * L - static_cast<double>(xs.size()) * dx) > 1e-9 * std::max(1.0, L)) {
      throw ConfigError("x column does not cover a periodic grid [-L, L)");
    }
    const Field u(Grid(L, xs.size()), us);
    const RearrangementReport rep =
        alpha ? rearrange(u, FractionalOrder(*alpha)) : rearrange(u);

    std::string csv = "x,u,u_star\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
      csv += g17(u.grid().x(i)) + "," + g17(u[i]) + "," + g17(rep.u_star[i]) + "\n";
    }
    if (output.has_parent_path()) prepare_out_dir(output.parent_path());
    write_file(output, csv);
    for (const auto& [q, d] : rep.lp_drift) out << "L" << q << " drift = " << g17(d) << "\n";
    if (rep.seminorm_gain) out << "seminorm gain = " << g17(*rep.seminorm_gain) << "\n";
    out << "wrote " << output.string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
}

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
  std::vector<PropertyResult> results;
  try {
    results = run_suite(suite);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kConfigError;
  }
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  margin=" << g17(r.margin);
    if (!r.detail.empty()) out << "  (" << r.detail << ")";
    out << "\n";
    all = all && r.passed;
  }
  out << suite << ": " << (all ? "all properties pass" : "failures present") << "\n";
  return all ? kOk : kNotConverged;
}

}  // namespace fracnls::app
