#pragma once

// Ground states by Nehari-projected descent, plus the sign, symmetry and
// c-versus-c_infinity diagnostics of the computed minimiser.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "fracnls/energy.hpp"
#include "fracnls/grid.hpp"
#include "fracnls/problem.hpp"

namespace fracnls {

struct FixedStep {
  double tau = 0.5;
};

/// Armijo backtracking on the reduced functional u -> I(sigma_u u).
struct Backtracking {
  double beta = 0.5;
  double c1 = 1e-4;
};

using StepRule = std::variant<Backtracking, FixedStep>;

struct GaussianBump {
  double center = 0.0;
  double width = 1.0;
};

struct CustomStart {
  Field u;
};

using StartRule = std::variant<GaussianBump, CustomStart>;

struct SolverConfig {
  int max_iters = 5000;
  double grad_tol = 1e-6;
  StepRule step_rule = Backtracking{};
  std::uint64_t seed = 0;
  StartRule start = GaussianBump{};
  /// Also converge the V = V_inf problem to fill c_infinity.
  bool compute_c_infinity = true;

  /// Throws ConfigError on nonpositive tolerances or steps.
  void check() const;
};

struct GroundStateReport {
  Field u;
  double c = 0.0;
  double residual = 0.0;
  double nonneg_violation = 0.0;  ///< ||u_-|| / ||u||
  double symmetry_defect = 0.0;   ///< ||u - u*|| / ||u||
  double c_infinity = 0.0;        ///< NaN when not computed
  int iterations = 0;
  bool converged = false;
  EnergyBreakdown energy;
  std::vector<double> level_history;  ///< I(sigma_k u_k) per accepted iterate, starting at the projected start
};

/// Throws PreconditionError for a start with no positive part.
GroundStateReport ground_state(const Problem& prob, const SolverConfig& cfg);

/// Initial field of the configured start rule on the problem grid.
Field initial_field(const Grid& grid, const StartRule& start);

/// Smooth random single-bump starts (with low-mode perturbations) for multistart runs.
std::vector<Field> random_starts(const Grid& grid, std::size_t count, std::uint64_t seed);

struct NonnegativityCheck {
  bool passed = false;
  double violation = 0.0;
};

NonnegativityCheck check_nonnegativity(const Field& u, double tol = 1e-6);
NonnegativityCheck check_nonnegativity(const GroundStateReport& report, double tol = 1e-6);

struct CInfinityComparison {
  enum class Verdict { strict_gap, equal_within_tol, violated };

  double c = 0.0;
  double c_inf = 0.0;
  double gap = 0.0;  ///< c_inf - c
  double tol = 0.0;
  Verdict verdict = Verdict::violated;
  bool converged = false;
};

/// Requires the below_Vinf flag and V <= V_inf on the grid (PreconditionError otherwise).
CInfinityComparison compare_c_to_c_infinity(const Problem& prob, const SolverConfig& cfg, double tol = 1e-6);

struct SymmetryDiagnostic {
  double defect = 0.0;
  double energy_u = 0.0;
  double energy_u_star = 0.0;
  bool energy_not_raised = false;  ///< I(u*) <= I(u) + tol * max(1, |I(u)|)
};

/// Requires the radial_increasing flag (PreconditionError otherwise).
SymmetryDiagnostic symmetry_diagnostic(const GroundStateReport& report, const Problem& prob, double tol = 1e-10);

}  // namespace fracnls
