#include "fracnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fracnls/errors.hpp"
#include "fracnls/nehari.hpp"
#include "fracnls/rearrange.hpp"

namespace fracnls {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinStep = 1e-12;

bool has_positive_part(const Field& u) {
  return std::any_of(u.values().begin(), u.values().end(), [](double v) { return v > 0.0; });
}

double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

double relative_l2_gap(const Field& a, const Field& b) {
  const double n = norm_l2(a);
  if (n == 0.0) return 0.0;
  return norm_l2(a - b) / n;
}

}  // namespace

void SolverConfig::check() const {
  if (max_iters < 0) throw ConfigError("max_iters must be nonnegative");
  if (!(grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
  if (const auto* fs = std::get_if<FixedStep>(&step_rule); fs && !(fs->tau > 0.0)) {
    throw ConfigError("fixed step tau must be positive");
  }
  if (const auto* bt = std::get_if<Backtracking>(&step_rule)) {
    if (!(bt->beta > 0.0 && bt->beta < 1.0)) throw ConfigError("backtracking beta must lie in (0, 1)");
    if (!(bt->c1 > 0.0 && bt->c1 < 1.0)) throw ConfigError("backtracking c1 must lie in (0, 1)");
  }
  if (const auto* gb = std::get_if<GaussianBump>(&start); gb && !(gb->width > 0.0)) {
    throw ConfigError("gaussian start width must be positive");
  }
}

Field initial_field(const Grid& grid, const StartRule& start) {
  if (const auto* gb = std::get_if<GaussianBump>(&start)) {
    return Field::sample(grid, [&](double x) {
      const double z = (x - gb->center) / gb->width;
      return std::exp(-z * z);
    });
  }
  const Field& u = std::get<CustomStart>(start).u;
  return u.grid() == grid ? u : resample(u, grid);
}

std::vector<Field> random_starts(const Grid& grid, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double L = grid.half_length();
  const double k0 = std::numbers::pi / L;
  std::vector<Field> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double center = (unit(rng) - 0.5) * 0.25 * L;
    const double width = 0.6 + 1.4 * unit(rng);
    const double amp = 0.5 + 1.5 * unit(rng);
    double a[4], b[4];
    for (int k = 0; k < 4; ++k) {
      a[k] = 0.1 * normal(rng);
      b[k] = 0.1 * normal(rng);
    }
    out.push_back(Field::sample(grid, [&](double x) {
      const double z = (x - center) / width;
      double wobble = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double kx = k0 * (k + 1) * 4.0 * x;
        wobble += a[k] * std::cos(kx) + b[k] * std::sin(kx);
      }
      const double envelope = std::exp(-z * z / 9.0);
      return amp * (std::exp(-z * z) + wobble * envelope);
    }));
  }
  return out;
}

GroundStateReport ground_state(const Problem& prob, const SolverConfig& cfg) {
  cfg.check();
  const Grid& grid = prob.grid();
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const auto& f = prob.nonlinearity();
  const auto V = prob.V_values();
  const auto sym = prob.symbol();

  Field u = initial_field(grid, cfg.start);
  if (!has_positive_part(u)) {
    throw PreconditionError("inadmissible start: positive part is empty, f vanishes along the whole ray");
  }

  // Descent runs in the metric of (|w|^2a + kappa): the H^a Riesz map of I'(u).
  double kappa = 0.0;
  for (double v : V) kappa += v;
  kappa /= static_cast<double>(n);
  std::vector<double> precond(n);
  for (std::size_t s = 0; s < n; ++s) precond[s] = 1.0 / (sym[s] + kappa);

  auto x_norm2 = [&](const Field& w, const Field& Aw) { return dot(w, Aw) + dx * weighted_dot(w.values(), w.values(), V); };

  Field Au = apply_real_multiplier(u, sym);
  {
    const FiberingReport fr = project_ray(x_norm2(u, Au), u.values(), f, dx);
    u *= fr.sigma_u;
    Au *= fr.sigma_u;
  }

  GroundStateReport rep{u, 0.0, 0.0, 0.0, 0.0, kNaN, 0, false, {}, {}};
  double J = evaluate_I(u, prob).total;
  rep.level_history.push_back(J);

  const auto* bt = std::get_if<Backtracking>(&cfg.step_rule);
  double tau = bt ? 1.0 : std::get<FixedStep>(cfg.step_rule).tau;
  Field g(grid);
  int it = 0;
  for (;; ++it) {
    Au = apply_real_multiplier(u, sym);
    const double X = x_norm2(u, Au);
    g = Au;
    for (std::size_t i = 0; i < n; ++i) g[i] += V[i] * u[i] - f.f(u[i]);
    rep.residual = norm_l2(g) / std::sqrt(X);
    if (rep.residual <= cfg.grad_tol) {
      rep.converged = true;
      break;
    }
    if (it >= cfg.max_iters) break;

    Field d = apply_real_multiplier(g, precond);
    d *= -1.0;
    const Field Ad = apply_real_multiplier(d, sym);
    const double slope = dot(g, d);
    const double uXd = dot(u, Ad) + dx * weighted_dot(u.values(), d.values(), V);
    const double dXd = dot(d, Ad) + dx * weighted_dot(d.values(), d.values(), V);

    // Unit step in the preconditioned metric; backtracking only shortens it.
    if (bt) tau = 1.0;
    bool accepted = false;
    Field trial(grid);
    FiberingReport fr;
    while (!accepted) {
      trial = u;
      trial.axpy(tau, d);
      if (has_positive_part(trial)) {
        const double Xt = X + 2.0 * tau * uXd + tau * tau * dXd;
        fr = project_ray(Xt, trial.values(), f, dx);
        if (!bt) {
          accepted = true;
        } else {
          const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(J);
          accepted = fr.psi_max <= J + bt->c1 * tau * slope + slack;
        }
      }
      if (!accepted) {
        if (!bt) break;
        tau *= bt->beta;
        if (tau < kMinStep) break;
      }
    }
    if (!accepted) break;  // line search stalled; reported as not converged

    trial *= fr.sigma_u;
    u = std::move(trial);
    J = fr.psi_max;
    rep.level_history.push_back(J);
  }

  rep.u = u;
  rep.iterations = it;
  rep.energy = evaluate_I(u, prob);
  rep.c = rep.energy.total;
  rep.nonneg_violation = check_nonnegativity(u).violation;
  rep.symmetry_defect = relative_l2_gap(u, symmetric_decreasing(u));

  if (cfg.compute_c_infinity) {
    const bool already_limit = std::all_of(V.begin(), V.end(), [&](double v) { return v == prob.potential().V_inf(); });
    if (already_limit) {
      rep.c_infinity = rep.c;
    } else {
      SolverConfig lim = cfg;
      lim.compute_c_infinity = false;
      rep.c_infinity = ground_state(prob.limit_problem(), lim).c;
    }
  }
  return rep;
}

NonnegativityCheck check_nonnegativity(const Field& u, double tol) {
  const double total = norm_l2(u);
  if (total == 0.0) return {true, 0.0};
  double neg = 0.0;
  for (double v : u.values()) {
    if (v < 0.0) neg += v * v;
  }
  const double violation = std::sqrt(u.grid().dx() * neg) / total;
  return {violation <= tol, violation};
}

NonnegativityCheck check_nonnegativity(const GroundStateReport& report, double tol) {
  return check_nonnegativity(report.u, tol);
}

CInfinityComparison compare_c_to_c_infinity(const Problem& prob, const SolverConfig& cfg, double tol) {
  if (!prob.potential().flags().below_Vinf) {
    throw PreconditionError("c vs c_infinity comparison needs a potential flagged below_Vinf");
  }
  const double vinf = prob.potential().V_inf();
  for (std::size_t i = 0; i < prob.grid().size(); ++i) {
    if (prob.V_values()[i] > vinf + 1e-12 * std::abs(vinf)) {
      throw PreconditionError("potential exceeds V_inf at t = " + std::to_string(prob.grid().x(i)));
    }
  }
  SolverConfig run = cfg;
  run.compute_c_infinity = false;
  const GroundStateReport r = ground_state(prob, run);
  const GroundStateReport r_inf = ground_state(prob.limit_problem(), run);
  CInfinityComparison out;
  out.c = r.c;
  out.c_inf = r_inf.c;
  out.gap = r_inf.c - r.c;
  out.tol = tol;
  out.converged = r.converged && r_inf.converged;
  if (out.gap >= tol) {
    out.verdict = CInfinityComparison::Verdict::strict_gap;
  } else if (std::abs(out.gap) < tol) {
    out.verdict = CInfinityComparison::Verdict::equal_within_tol;
  } else {
    out.verdict = CInfinityComparison::Verdict::violated;
  }
  return out;
}

SymmetryDiagnostic symmetry_diagnostic(const GroundStateReport& report, const Problem& prob, double tol) {
  if (!prob.potential().flags().radial_increasing) {
    throw PreconditionError("symmetry diagnostic needs a potential flagged radial_increasing");
  }
  const Field us = symmetric_decreasing(report.u);
  SymmetryDiagnostic d;
  d.defect = relative_l2_gap(report.u, us);
  d.energy_u = evaluate_I(report.u, prob).total;
  d.energy_u_star = evaluate_I(us, prob).total;
  d.energy_not_raised = d.energy_u_star <= d.energy_u + tol * std::max(1.0, std::abs(d.energy_u));
  return d;
}

}  // namespace fracnls
