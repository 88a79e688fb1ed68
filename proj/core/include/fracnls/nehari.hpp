#pragma once

// Fibering maps psi(sigma) = I(sigma u), the projection onto the Nehari
// manifold {u != 0 : I'(u) u = 0}, and the ground-state level c = inf over
// that manifold together with its comparison and continuity properties.

#include <span>
#include <vector>

#include "fracnls/grid.hpp"
#include "fracnls/problem.hpp"

namespace fracnls {

struct SolverConfig;

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct FiberingReport {
  double sigma_u = 0.0;
  double psi_max = 0.0;          ///< I(sigma_u u)
  Bracket bracket;
  int iterations = 0;
  double nehari_residual = 0.0;  ///< I'(sigma_u u)(sigma_u u)
  double x_norm2 = 0.0;          ///< ||u||_X^2 of the input direction
};

/// m(sigma) = ||u||_X^2 - int f(sigma u) u / sigma; zero exactly at sigma_u.
double fibering_mismatch(const Field& u, const Problem& prob, double sigma);
/// psi(sigma) = I(sigma u).
double fibering_value(const Field& u, const Problem& prob, double sigma);

/// Unique sigma_u > 0 with sigma_u u on the Nehari manifold. Throws
/// NoProjectionError if u has no positive part and RefinementError if the
/// mismatch cannot be bracketed.
FiberingReport nehari_project(const Field& u, const Problem& prob);

/// Same root solve from precomputed ||u||_X^2 and samples; used by the solver.
FiberingReport project_ray(double x_norm2, std::span<const double> u, const Nonlinearity& f, double dx);

struct LevelEstimate {
  enum class Method { nehari_min };

  double c = 0.0;
  Field minimizer;
  Method method = Method::nehari_min;
  double refinement_drift = 0.0;  ///< |c(2N) - c(N)| / |c(N)|, NaN when not refined
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> start_levels;  ///< level reached from each admissible start
};

/// Best Nehari-constrained minimum over `starts` (inadmissible starts are
/// skipped; PreconditionError if none remain). With `refine`, the best
/// minimiser is re-converged on the 2N grid to fill refinement_drift.
LevelEstimate level_c(const Problem& prob, std::span<const Field> starts, const SolverConfig& cfg,
                      bool refine = false);
/// level_c for the problem with V replaced by V_inf.
LevelEstimate level_c_infinity(const Problem& prob, std::span<const Field> starts, const SolverConfig& cfg,
                               bool refine = false);

struct LevelComparison {
  double c_a = 0.0;
  double c_b = 0.0;
  double tol = 0.0;
  bool verdict = false;  ///< c_a >= c_b - tol
  bool converged = false;
};

/// Levels for V_a >= V_b (pointwise on the grid, else PreconditionError).
LevelComparison compare_levels(const Potential& V_a, const Potential& V_b, const Problem& prob,
                               const SolverConfig& cfg, double tol = 1e-6);

struct ContinuityRow {
  double epsilon = 0.0;
  double c = 0.0;
  int iterations = 0;
  double refinement_drift = 0.0;
  double residual = 0.0;
  bool converged = false;
};

struct ContinuitySweep {
  std::vector<ContinuityRow> rows;  ///< in input order
  double c_V = 0.0;                 ///< level of the unshifted potential
  bool monotone = false;            ///< c nondecreasing in eps (within tol)
  bool converging = false;          ///< |c_eps - c_V| decreases as eps -> 0 from each side
  double tol = 0.0;
};

/// Levels of V + eps for each eps. Throws ConfigError if some V + eps breaks
/// the positive floor. Points run on up to `jobs` threads.
ContinuitySweep continuity_sweep(const Potential& V, std::span<const double> epsilons, const Problem& prob,
                                 const SolverConfig& cfg, unsigned jobs = 1, bool refine = false,
                                 double tol = 1e-6);

}  // namespace fracnls
