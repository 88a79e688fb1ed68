#pragma once

// Nonlinearity f, potential V and the sampled hypothesis validators.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fracnls/grid.hpp"

namespace fracnls {

class Nonlinearity {
 public:
  enum class Kind { power, tabulated };

  /// f(xi) = max(xi, 0)^p with theta = p + 1.
  static Nonlinearity power(double p, double p0);
  /// Power law with an explicitly declared theta (used to model mis-declared problems).
  static Nonlinearity power(double p, double p0, double theta);
  /// f given at nodes 0 = xi_0 < xi_1 < ... with derivatives; cubic Hermite in
  /// between, power-law continuation past the last node, zero for xi <= 0.
  /// F is the exact integral of the interpolant.
  static Nonlinearity tabulated(std::vector<double> xi, std::vector<double> f, std::vector<double> df,
                                double theta, double p0);

  double f(double xi) const;
  double df(double xi) const;
  double F(double xi) const;

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }
  double theta() const { return theta_; }
  double p0() const { return p0_; }
  std::string describe() const;

 private:
  Nonlinearity() = default;
  std::size_t segment(double xi) const;

  Kind kind_ = Kind::power;
  double p_ = 3.0;
  double theta_ = 4.0;
  double p0_ = 3.5;
  std::vector<double> xi_, f_, df_, F_;
  double tail_q_ = 0.0;
};

struct PotentialFlags {
  bool radial_increasing = false;
  bool below_Vinf = false;
};

class Potential {
 public:
  Potential(std::function<double(double)> evaluator, double V0, double V_inf, PotentialFlags flags,
            std::string description);

  static Potential constant(double value, PotentialFlags flags = {true, false});
  static Potential from_expression(const std::string& expr, double V0, double V_inf, PotentialFlags flags);
  /// Piecewise-linear through (t_i, V_i), constant beyond the ends.
  static Potential from_table(std::vector<double> t, std::vector<double> v, double V0, double V_inf,
                              PotentialFlags flags);

  double operator()(double t) const { return eval_(t) + shift_; }
  std::vector<double> sample(const Grid& grid) const;

  /// V + eps with floor and asymptotic constant shifted alike.
  Potential shifted(double eps) const;
  /// The constant potential V_inf.
  Potential limit() const;

  double V0() const { return V0_; }
  double V_inf() const { return V_inf_; }
  const PotentialFlags& flags() const { return flags_; }
  const std::string& description() const { return description_; }
  bool is_constant() const { return constant_; }

 private:
  std::function<double(double)> eval_;
  double V0_;
  double V_inf_;
  PotentialFlags flags_;
  std::string description_;
  double shift_ = 0.0;
  bool constant_ = false;
};

/// One hypothesis outcome; `at` is the first violating xi (or grid point), NaN on pass.
struct HypothesisCheck {
  std::string name;
  bool passed = true;
  double at = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;

  bool passed() const;
  /// First failed check, or nullptr.
  const HypothesisCheck* first_failure() const;
  const HypothesisCheck* find(const std::string& name) const;
  std::string summary() const;
};

/// Sampled check of (f0)-(f3) on log-spaced xi in [1e-6, 1e3]. Throws
/// ConfigError for sample_count < 100.
ValidationReport validate_nonlinearity(const Nonlinearity& f, std::size_t sample_count = 400);

struct GrowthBound {
  double c_eps = 0.0;     ///< smallest sampled constant for |f| <= eps|xi| + C|xi|^p0
  double argmax_xi = 0.0; ///< where the constant is attained
  bool primitive_bound_holds = false;
  bool bounded = false;   ///< false when the ratio still grows at the top of the sample
};

GrowthBound growth_bound_check(const Nonlinearity& f, double epsilon, std::size_t sample_count = 400);

/// (V1)-(V5) on the grid. The (V2)/(V3) liminf proxy uses the outer 10% of
/// the grid with absolute tolerance `tol`.
ValidationReport validate_potential(const Potential& V, const Grid& grid, double tol = 1e-2);

/// alpha, grid, f and V bundled with V sampled on the grid.
class Problem {
 public:
  Problem(FractionalOrder alpha, Grid grid, Nonlinearity f, Potential V);

  FractionalOrder alpha() const { return alpha_; }
  const Grid& grid() const { return grid_; }
  const Nonlinearity& nonlinearity() const { return f_; }
  const Potential& potential() const { return V_; }
  std::span<const double> V_values() const { return V_values_; }
  std::span<const double> symbol() const { return symbol_; }

  Problem with_potential(Potential V) const;
  Problem with_grid(Grid grid) const;
  Problem with_alpha(FractionalOrder alpha) const;
  Problem with_nonlinearity(Nonlinearity f) const;
  /// Same problem with V replaced by the constant V_inf.
  Problem limit_problem() const;

  /// Both validators; throws ConfigError naming the first failed hypothesis.
  /// Potential flags are only checked when set.
  void validate(std::size_t sample_count = 400) const;

 private:
  FractionalOrder alpha_;
  Grid grid_;
  Nonlinearity f_;
  Potential V_;
  std::vector<double> V_values_;
  std::vector<double> symbol_;
};

}  // namespace fracnls
