#pragma once

// Command layer behind the `fracnls` executable: config parsing, the four
// subcommands and the run manifest.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracnls/nehari.hpp"
#include "fracnls/problem.hpp"
#include "fracnls/solver.hpp"

namespace fracnls::app {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNotConverged = 2 };

struct NonlinearitySpec {
  std::string kind = "power";  ///< "power" or "table"
  double p = 3.0;
  double p0 = 3.5;
  std::optional<double> theta;
  std::vector<double> xi, f, df;
};

struct PotentialSpec {
  std::string expr = "1";
  std::vector<double> t, v;  ///< used instead of expr when non-empty
  double V0 = 1.0;
  double V_inf = 1.0;
  PotentialFlags flags{true, false};
  double shift = 0.0;  ///< epsilon of a V + eps sweep
};

struct SolverSpec {
  int max_iters = 5000;
  double grad_tol = 1e-6;
  std::string step_rule = "backtracking";  ///< or "fixed"
  double tau = 0.5;
  double beta = 0.5;
  double c1 = 1e-4;
  std::uint64_t seed = 0;
  std::string start = "gaussian";  ///< or "random"
  double center = 0.0;
  double width = 1.0;
};

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
};

struct RunConfig {
  std::string tag = "run";
  double alpha = 0.75;
  double L = 20.0;
  std::size_t N = 1024;
  NonlinearitySpec nonlinearity;
  PotentialSpec potential;
  SolverSpec solver;
  std::optional<SweepSpec> sweep;
  nlohmann::json source;  ///< parsed input, digested into the manifest
};

/// Throws ConfigError on unknown keys, wrong types or missing files.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Validated problem; ConfigError names the failed hypothesis.
Problem build_problem(const RunConfig& cfg);
SolverConfig build_solver(const RunConfig& cfg, const Grid& grid);

/// Copy of cfg with one sweep parameter set: epsilon, alpha, p, L, N or Vinf.
RunConfig with_parameter(const RunConfig& cfg, const std::string& parameter, double value);

struct GroundStateOutcome {
  GroundStateReport report;
  double truncation_err;    ///< |c(2L, same dx) - c| / |c|, NaN without refinement
  double refinement_drift;  ///< |c(2N) - c| / |c|, NaN without refinement
};

GroundStateOutcome run_ground_state(const Problem& prob, const SolverConfig& solver, bool refine);

nlohmann::ordered_json report_json(const RunConfig& cfg, const GroundStateOutcome& out);
std::string profile_csv(const Field& u);

std::string sha256_hex(const std::string& bytes);
/// Canonical digest of the parsed config (keys sorted, shortest round-trip numbers).
std::string config_digest(const RunConfig& cfg);

struct CommonOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool refine = true;
};

int cmd_ground_state(const CommonOptions& opt, std::ostream& out, std::ostream& err);

/// parameter / values override the config's `sweep` block when given.
int cmd_sweep(const CommonOptions& opt, const std::optional<std::string>& parameter,
              const std::optional<std::vector<double>>& values, std::ostream& out, std::ostream& err);

/// One-shot rearrangement of an x,u CSV into x,u,u_star.
int cmd_rearrange(const std::filesystem::path& input, const std::filesystem::path& output,
                  std::optional<double> alpha, std::ostream& out, std::ostream& err);

struct PropertyResult {
  std::string name;
  bool passed = false;
  double margin = 0.0;  ///< distance to the threshold; negative when violated
  std::string detail;
};

/// Throws ConfigError for an unknown suite.
std::vector<PropertyResult> run_suite(const std::string& suite);
const std::vector<std::string>& suite_names();

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err);

}  // namespace fracnls::app
