#include "fracnls/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracnls/errors.hpp"
#include "fracnls/expression.hpp"

namespace fracnls {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> log_samples(double lo, double hi, std::size_t n) {
  std::vector<double> xs(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

// Least-squares slope of log(y) against log(x) over the samples with x in [lo, hi].
double log_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo || x[i] > hi || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Minimum log-log slope that counts as "still tending to zero" / "still decaying".
constexpr double kSlopeFloor = 1e-3;

}  // namespace

Nonlinearity Nonlinearity::power(double p, double p0) { return power(p, p0, p + 1.0); }

Nonlinearity Nonlinearity::power(double p, double p0, double theta) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("power nonlinearity needs a positive exponent");
  Nonlinearity n;
  n.kind_ = Kind::power;
  n.p_ = p;
  n.p0_ = p0;
  n.theta_ = theta;
  return n;
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> xi, std::vector<double> f, std::vector<double> df,
                                     double theta, double p0) {
  if (xi.size() < 2 || f.size() != xi.size() || df.size() != xi.size()) {
    throw ConfigError("tabulated nonlinearity needs >= 2 nodes with matching f and f' columns");
  }
  if (xi.front() != 0.0 || f.front() != 0.0) {
    throw ConfigError("tabulated nonlinearity must start at xi = 0 with f(0) = 0");
  }
  for (std::size_t i = 1; i < xi.size(); ++i) {
    if (!(xi[i] > xi[i - 1])) throw ConfigError("tabulated nonlinearity nodes must be strictly increasing");
  }
  if (!(f.back() > 0.0)) throw ConfigError("tabulated nonlinearity must be positive at its last node");
  Nonlinearity n;
  n.kind_ = Kind::tabulated;
  n.theta_ = theta;
  n.p0_ = p0;
  n.xi_ = std::move(xi);
  n.f_ = std::move(f);
  n.df_ = std::move(df);
  n.F_.assign(n.xi_.size(), 0.0);
  for (std::size_t i = 1; i < n.xi_.size(); ++i) {
    const double h = n.xi_[i] - n.xi_[i - 1];
    n.F_[i] = n.F_[i - 1] + 0.5 * h * (n.f_[i - 1] + n.f_[i]) + h * h * (n.df_[i - 1] - n.df_[i]) / 12.0;
  }
  n.tail_q_ = n.xi_.back() * n.df_.back() / n.f_.back();
  n.p_ = n.tail_q_;
  return n;
}

std::size_t Nonlinearity::segment(double xi) const {
  const auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  return static_cast<std::size_t>(std::distance(xi_.begin(), it)) - 1;
}

namespace {

/// Monomial coefficients of the cubic Hermite segment in t = xi - xi_i.
std::array<double, 4> hermite_monomial(double h, double f0, double f1, double d0, double d1) {
  const double slope = (f1 - f0) / h;
  return {f0, d0, (3.0 * slope - 2.0 * d0 - d1) / h, (d0 + d1 - 2.0 * slope) / (h * h)};
}

}  // namespace

double Nonlinearity::f(double xi) const {
  if (xi <= 0.0) return 0.0;
  if (kind_ == Kind::power) return std::pow(xi, p_);
  if (xi >= xi_.back()) return f_.back() * std::pow(xi / xi_.back(), tail_q_);
  const std::size_t i = segment(xi);
  const auto c = hermite_monomial(xi_[i + 1] - xi_[i], f_[i], f_[i + 1], df_[i], df_[i + 1]);
  const double t = xi - xi_[i];
  return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
}

double Nonlinearity::df(double xi) const {
  if (xi <= 0.0) return 0.0;
  if (kind_ == Kind::power) return p_ * std::pow(xi, p_ - 1.0);
  if (xi >= xi_.back()) return tail_q_ * f(xi) / xi;
  const std::size_t i = segment(xi);
  const auto c = hermite_monomial(xi_[i + 1] - xi_[i], f_[i], f_[i + 1], df_[i], df_[i + 1]);
  const double t = xi - xi_[i];
  return c[1] + t * (2.0 * c[2] + t * 3.0 * c[3]);
}

double Nonlinearity::F(double xi) const {
  if (xi <= 0.0) return 0.0;
  if (kind_ == Kind::power) return std::pow(xi, p_ + 1.0) / (p_ + 1.0);
  if (xi >= xi_.back()) {
    const double r = xi / xi_.back();
    return F_.back() + f_.back() * xi_.back() / (tail_q_ + 1.0) * (std::pow(r, tail_q_ + 1.0) - 1.0);
  }
  const std::size_t i = segment(xi);
  const auto c = hermite_monomial(xi_[i + 1] - xi_[i], f_[i], f_[i + 1], df_[i], df_[i + 1]);
  const double t = xi - xi_[i];
  return F_[i] + t * (c[0] + t * (c[1] / 2.0 + t * (c[2] / 3.0 + t * c[3] / 4.0)));
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::power) {
    os << "power(p=" << p_ << ")";
  } else {
    os << "tabulated(" << xi_.size() << " nodes)";
  }
  os << " theta=" << theta_ << " p0=" << p0_;
  return os.str();
}

Potential::Potential(std::function<double(double)> evaluator, double V0, double V_inf, PotentialFlags flags,
                     std::string description)
    : eval_(std::move(evaluator)), V0_(V0), V_inf_(V_inf), flags_(flags), description_(std::move(description)) {}

Potential Potential::constant(double value, PotentialFlags flags) {
  std::ostringstream os;
  os << "constant(" << value << ")";
  Potential p([value](double) { return value; }, value, value, flags, os.str());
  p.constant_ = true;
  return p;
}

Potential Potential::from_expression(const std::string& expr, double V0, double V_inf, PotentialFlags flags) {
  return Potential(compile_expression(expr), V0, V_inf, flags, expr);
}

Potential Potential::from_table(std::vector<double> t, std::vector<double> v, double V0, double V_inf,
                                PotentialFlags flags) {
  if (t.size() < 2 || t.size() != v.size()) throw ConfigError("potential table needs >= 2 (t, V) rows");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw ConfigError("potential table abscissae must be strictly increasing");
  }
  auto eval = [t = std::move(t), v = std::move(v)](double x) {
    if (x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t i = static_cast<std::size_t>(std::distance(t.begin(), it)) - 1;
    const double s = (x - t[i]) / (t[i + 1] - t[i]);
    return (1.0 - s) * v[i] + s * v[i + 1];
  };
  return Potential(std::move(eval), V0, V_inf, flags, "table");
}

std::vector<double> Potential::sample(const Grid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(grid.x(i));
  return out;
}

Potential Potential::shifted(double eps) const {
  Potential p = *this;
  p.shift_ += eps;
  p.V0_ += eps;
  p.V_inf_ += eps;
  std::ostringstream os;
  os << description_ << (eps >= 0 ? " + " : " - ") << std::abs(eps);
  p.description_ = os.str();
  return p;
}

Potential Potential::limit() const { return constant(V_inf_); }

bool ValidationReport::passed() const { return first_failure() == nullptr; }

const HypothesisCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

const HypothesisCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.name << ": " << (c.passed ? "pass" : "FAIL");
    if (!c.passed) os << " at " << c.at << " (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

ValidationReport validate_nonlinearity(const Nonlinearity& nl, std::size_t sample_count) {
  if (sample_count < 100) throw ConfigError("hypothesis validation needs at least 100 samples");
  const auto xs = log_samples(1e-6, 1e3, sample_count);
  ValidationReport rep;

  HypothesisCheck f0{"f0", true, kNaN, ""};
  if (nl.f(0.0) != 0.0) {
    f0 = {"f0", false, 0.0, "f(0) must vanish"};
  } else {
    for (double x : xs) {
      if (!(nl.f(x) >= 0.0)) {
        f0 = {"f0", false, x, "f must be nonnegative for xi >= 0"};
        break;
      }
      if (nl.f(-x) != 0.0) {
        f0 = {"f0", false, -x, "f must vanish for xi <= 0"};
        break;
      }
    }
  }
  rep.checks.push_back(f0);

  HypothesisCheck f1{"f1", true, kNaN, ""};
  std::vector<double> ratio(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ratio[i] = nl.f(xs[i]) / xs[i];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(ratio[i] > ratio[i - 1])) {
      f1 = {"f1", false, xs[i], "f(xi)/xi is not strictly increasing"};
      break;
    }
  }
  if (f1.passed && ratio.front() > 0.0) {
    const double slope = log_slope(xs, ratio, xs.front(), 10.0 * xs.front());
    if (slope < kSlopeFloor) f1 = {"f1", false, xs.front(), "f(xi)/xi does not tend to 0 as xi -> 0+"};
  }
  rep.checks.push_back(f1);

  HypothesisCheck f2{"f2", true, kNaN, ""};
  if (!(nl.theta() > 2.0)) {
    f2 = {"f2", false, kNaN, "theta must exceed 2"};
  } else {
    for (double x : xs) {
      const double Fx = nl.F(x);
      const double rhs = x * nl.f(x);
      if (!(Fx > 0.0)) {
        f2 = {"f2", false, x, "F must be positive for xi > 0"};
        break;
      }
      if (nl.theta() * Fx > rhs * (1.0 + 1e-12)) {
        f2 = {"f2", false, x, "theta F(xi) exceeds xi f(xi)"};
        break;
      }
    }
  }
  rep.checks.push_back(f2);

  HypothesisCheck f3{"f3", true, kNaN, ""};
  if (!(nl.p0() + 1.0 > nl.theta())) {
    f3 = {"f3", false, kNaN, "need p0 + 1 > theta"};
  } else {
    std::vector<double> growth(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) growth[i] = nl.f(xs[i]) / std::pow(xs[i], nl.p0());
    const double slope = log_slope(xs, growth, xs.back() / 10.0, xs.back());
    if (slope > -kSlopeFloor) f3 = {"f3", false, xs.back(), "f(xi)/xi^p0 does not tend to 0 as xi -> inf"};
  }
  rep.checks.push_back(f3);
  return rep;
}

GrowthBound growth_bound_check(const Nonlinearity& nl, double epsilon, std::size_t sample_count) {
  if (!(epsilon > 0.0)) throw ConfigError("growth bound needs epsilon > 0");
  if (sample_count < 100) throw ConfigError("growth bound needs at least 100 samples");
  const auto xs = log_samples(1e-6, 1e3, sample_count);
  GrowthBound gb;
  std::vector<double> growth(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double c = (std::abs(nl.f(x)) - epsilon * x) / std::pow(x, nl.p0());
    growth[i] = nl.f(x) / std::pow(x, nl.p0());
    if (c > gb.c_eps) {
      gb.c_eps = c;
      gb.argmax_xi = x;
    }
  }
  gb.bounded = log_slope(xs, growth, xs.back() / 10.0, xs.back()) <= kSlopeFloor;
  gb.primitive_bound_holds = true;
  for (double x : xs) {
    const double bound = 0.5 * epsilon * x * x + gb.c_eps / (nl.p0() + 1.0) * std::pow(x, nl.p0() + 1.0);
    if (std::abs(nl.F(x)) > bound * (1.0 + 1e-12)) {
      gb.primitive_bound_holds = false;
      break;
    }
  }
  return gb;
}

ValidationReport validate_potential(const Potential& V, const Grid& grid, double tol) {
  const auto v = V.sample(grid);
  const std::size_t n = grid.size();
  ValidationReport rep;

  HypothesisCheck v1{"V1", true, kNaN, ""};
  if (!(V.V0() > 0.0)) {
    v1 = {"V1", false, kNaN, "declared floor V0 must be positive"};
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(v[i]) || v[i] < V.V0()) {
        v1 = {"V1", false, grid.x(i), "V falls below its floor V0"};
        break;
      }
    }
  }
  rep.checks.push_back(v1);

  // Outer 10% of the window, both ends.
  const double cut = 0.9 * grid.half_length();
  double outer_min = std::numeric_limits<double>::infinity();
  double outer_at = kNaN;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(grid.x(i)) >= cut && v[i] < outer_min) {
      outer_min = v[i];
      outer_at = grid.x(i);
    }
  }
  HypothesisCheck v2{"V2", true, kNaN, ""};
  if (outer_min < V.V_inf() - tol) v2 = {"V2", false, outer_at, "liminf proxy below V_inf"};
  rep.checks.push_back(v2);
  HypothesisCheck v3{"V3", true, kNaN, ""};
  if (std::abs(outer_min - V.V_inf()) > tol) v3 = {"V3", false, outer_at, "liminf proxy differs from V_inf"};
  rep.checks.push_back(v3);

  if (V.flags().below_Vinf) {
    HypothesisCheck v4{"V4", true, kNaN, ""};
    bool strict = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] > V.V_inf() + 1e-12 * std::abs(V.V_inf())) {
        v4 = {"V4", false, grid.x(i), "V exceeds V_inf"};
        break;
      }
      if (v[i] < V.V_inf() - 1e-12 * std::abs(V.V_inf())) strict = true;
    }
    if (v4.passed && !strict) v4 = {"V4", false, kNaN, "V is identically V_inf"};
    rep.checks.push_back(v4);
  }

  if (V.flags().radial_increasing) {
    HypothesisCheck v5{"V5", true, kNaN, ""};
    const std::size_t c = grid.center_index();
    for (std::size_t k = 1; k < n / 2 && v5.passed; ++k) {
      const double left = v[c - k], right = v[c + k];
      const double scale = std::max({1.0, std::abs(left), std::abs(right)});
      if (std::abs(left - right) > 1e-12 * scale) {
        v5 = {"V5", false, grid.x(c + k), "V is not even"};
      } else if (right < v[c + k - 1] - 1e-12 * scale || left < v[c - k + 1] - 1e-12 * scale) {
        v5 = {"V5", false, grid.x(c + k), "V decreases in |t|"};
      }
    }
    if (v5.passed && v[0] < v[1] - 1e-12 * std::max(1.0, std::abs(v[1]))) {
      v5 = {"V5", false, grid.x(0), "V decreases in |t|"};
    }
    rep.checks.push_back(v5);
  }
  return rep;
}

Problem::Problem(FractionalOrder alpha, Grid grid, Nonlinearity f, Potential V)
    : alpha_(alpha),
      grid_(std::move(grid)),
      f_(std::move(f)),
      V_(std::move(V)),
      V_values_(V_.sample(grid_)),
      symbol_(composed_symbol(grid_, alpha_)) {}

Problem Problem::with_potential(Potential V) const { return Problem(alpha_, grid_, f_, std::move(V)); }
Problem Problem::with_grid(Grid grid) const { return Problem(alpha_, std::move(grid), f_, V_); }
Problem Problem::with_alpha(FractionalOrder alpha) const { return Problem(alpha, grid_, f_, V_); }
Problem Problem::with_nonlinearity(Nonlinearity f) const { return Problem(alpha_, grid_, std::move(f), V_); }
Problem Problem::limit_problem() const { return with_potential(V_.limit()); }

void Problem::validate(std::size_t sample_count) const {
  const auto nrep = validate_nonlinearity(f_, sample_count);
  if (const auto* bad = nrep.first_failure()) {
    std::ostringstream os;
    os << "hypothesis (" << bad->name << ") failed for " << f_.describe() << ": " << bad->detail;
    if (std::isfinite(bad->at)) os << " at xi = " << bad->at;
    throw ConfigError(os.str());
  }
  const auto vrep = validate_potential(V_, grid_);
  if (const auto* bad = vrep.first_failure()) {
    std::ostringstream os;
    os << "hypothesis (" << bad->name << ") failed for potential " << V_.description() << ": " << bad->detail;
    if (std::isfinite(bad->at)) os << " at t = " << bad->at;
    throw ConfigError(os.str());
  }
}

}  // namespace fracnls
