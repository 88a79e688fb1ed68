#include "fracnls/nehari.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "fracnls/energy.hpp"
#include "fracnls/errors.hpp"
#include "fracnls/solver.hpp"

namespace fracnls {
namespace {

struct RayTerms {
  double drive = 0.0;  ///< int f(sigma u) u / sigma
  double slope = 0.0;  ///< d/dsigma of drive
};

RayTerms ray_terms(std::span<const double> u, const Nonlinearity& f, double dx, double sigma) {
  double a = 0.0, b = 0.0;
  for (double v : u) {
    if (v <= 0.0) continue;
    const double s = sigma * v;
    const double fs = f.f(s);
    a += fs * v;
    b += (s * f.df(s) - fs) * v;
  }
  return {dx * a / sigma, dx * b / (sigma * sigma)};
}

double primitive_sum(std::span<const double> u, const Nonlinearity& f, double dx, double sigma) {
  double acc = 0.0;
  for (double v : u) acc += f.F(sigma * v);
  return dx * acc;
}

constexpr int kMaxExpansions = 400;
constexpr int kMaxRootIterations = 200;

}  // namespace

FiberingReport project_ray(double x_norm2, std::span<const double> u, const Nonlinearity& f, double dx) {
  if (std::none_of(u.begin(), u.end(), [](double v) { return v > 0.0; })) {
    throw NoProjectionError("field has no positive part; I(sigma u) never turns negative along its ray");
  }
  if (!(x_norm2 > 0.0)) throw NoProjectionError("ray direction has zero X-norm");

  auto mismatch = [&](double s) { return x_norm2 - ray_terms(u, f, dx, s).drive; };

  FiberingReport rep;
  rep.x_norm2 = x_norm2;
  double lo = 1.0, hi = 1.0;
  double m_lo = mismatch(1.0);
  double m_hi = m_lo;
  int expansions = 0;
  if (m_lo > 0.0) {
    while (m_hi > 0.0) {
      if (++expansions > kMaxExpansions) throw RefinementError("Nehari mismatch stays positive under doubling");
      lo = hi;
      m_lo = m_hi;
      hi *= 2.0;
      m_hi = mismatch(hi);
    }
  } else {
    while (m_lo <= 0.0) {
      if (++expansions > kMaxExpansions) throw RefinementError("Nehari mismatch stays nonpositive under halving");
      hi = lo;
      m_hi = m_lo;
      lo *= 0.5;
      m_lo = mismatch(lo);
    }
  }
  rep.bracket = {lo, hi};

  // Hybrid Newton-bisection on the strictly decreasing mismatch.
  const double target = 1e-12 * x_norm2;
  double sigma = 0.5 * (lo + hi);
  double m = 0.0;
  int it = 0;
  for (; it < kMaxRootIterations; ++it) {
    const RayTerms t = ray_terms(u, f, dx, sigma);
    m = x_norm2 - t.drive;
    if (std::abs(m) <= target) break;
    if (m > 0.0) {
      lo = sigma;
    } else {
      hi = sigma;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    double next = t.slope > 0.0 ? sigma + m / t.slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    sigma = next;
  }
  rep.sigma_u = sigma;
  rep.iterations = it + expansions;
  rep.nehari_residual = sigma * sigma * m;
  rep.psi_max = 0.5 * sigma * sigma * x_norm2 - primitive_sum(u, f, dx, sigma);
  return rep;
}

double fibering_mismatch(const Field& u, const Problem& prob, double sigma) {
  return x_norm_squared(u, prob) - ray_terms(u.values(), prob.nonlinearity(), u.grid().dx(), sigma).drive;
}

double fibering_value(const Field& u, const Problem& prob, double sigma) {
  return 0.5 * sigma * sigma * x_norm_squared(u, prob) -
         primitive_sum(u.values(), prob.nonlinearity(), u.grid().dx(), sigma);
}

FiberingReport nehari_project(const Field& u, const Problem& prob) {
  return project_ray(x_norm_squared(u, prob), u.values(), prob.nonlinearity(), u.grid().dx());
}

LevelEstimate level_c(const Problem& prob, std::span<const Field> starts, const SolverConfig& cfg, bool refine) {
  std::optional<GroundStateReport> best;
  std::vector<double> levels;
  SolverConfig run = cfg;
  run.compute_c_infinity = false;
  for (const Field& s : starts) {
    if (std::none_of(s.values().begin(), s.values().end(), [](double v) { return v > 0.0; })) continue;
    run.start = CustomStart{s};
    GroundStateReport r = ground_state(prob, run);
    levels.push_back(r.c);
    if (!best || r.c < best->c) best = std::move(r);
  }
  if (!best) throw PreconditionError("no admissible start: every start has an empty positive part");

  LevelEstimate est{best->c, best->u, LevelEstimate::Method::nehari_min, std::numeric_limits<double>::quiet_NaN(),
                    best->converged, best->iterations, best->residual, std::move(levels)};
  if (refine) {
    const Grid fine(prob.grid().half_length(), 2 * prob.grid().size());
    run.start = CustomStart{resample(best->u, fine)};
    const GroundStateReport r2 = ground_state(prob.with_grid(fine), run);
    est.refinement_drift = std::abs(r2.c - best->c) / std::abs(best->c);
  }
  return est;
}

LevelEstimate level_c_infinity(const Problem& prob, std::span<const Field> starts, const SolverConfig& cfg,
                               bool refine) {
  return level_c(prob.limit_problem(), starts, cfg, refine);
}

LevelComparison compare_levels(const Potential& V_a, const Potential& V_b, const Problem& prob,
                               const SolverConfig& cfg, double tol) {
  const auto a = V_a.sample(prob.grid());
  const auto b = V_b.sample(prob.grid());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) {
      std::ostringstream os;
      os << "level comparison needs V_a >= V_b pointwise; violated at t = " << prob.grid().x(i);
      throw PreconditionError(os.str());
    }
  }
  SolverConfig run = cfg;
  run.compute_c_infinity = false;
  const GroundStateReport ra = ground_state(prob.with_potential(V_a), run);
  const GroundStateReport rb = ground_state(prob.with_potential(V_b), run);
  return {ra.c, rb.c, tol, ra.c >= rb.c - tol, ra.converged && rb.converged};
}

ContinuitySweep continuity_sweep(const Potential& V, std::span<const double> epsilons, const Problem& prob,
                                 const SolverConfig& cfg, unsigned jobs, bool refine, double tol) {
  const auto base = V.sample(prob.grid());
  const double vmin = *std::min_element(base.begin(), base.end());
  for (double e : epsilons) {
    if (!(vmin + e > 0.0) || !(V.V0() + e > 0.0)) {
      std::ostringstream os;
      os << "V + " << e << " violates the positive floor (V1)";
      throw ConfigError(os.str());
    }
  }

  // Slot 0 is the unshifted potential.
  std::vector<double> points{0.0};
  points.insert(points.end(), epsilons.begin(), epsilons.end());
  std::vector<ContinuityRow> rows(points.size());
  SolverConfig run = cfg;
  run.compute_c_infinity = false;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const Problem p = prob.with_potential(V.shifted(points[i]));
      const GroundStateReport r = ground_state(p, run);
      ContinuityRow row{points[i], r.c, r.iterations, std::numeric_limits<double>::quiet_NaN(), r.residual,
                        r.converged};
      if (refine) {
        const Grid fine(prob.grid().half_length(), 2 * prob.grid().size());
        SolverConfig rc = run;
        rc.start = CustomStart{resample(r.u, fine)};
        row.refinement_drift = std::abs(ground_state(p.with_grid(fine), rc).c - r.c) / std::abs(r.c);
      }
      rows[i] = row;
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  ContinuitySweep out;
  out.tol = tol;
  out.c_V = rows.front().c;
  out.rows.assign(rows.begin() + 1, rows.end());

  std::vector<ContinuityRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.epsilon < b.epsilon; });
  out.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].c < sorted[i - 1].c - tol) out.monotone = false;
  }
  // Moving away from eps = 0 on either side the distance to c_V must grow.
  out.converging = true;
  double prev_pos = 0.0, prev_neg = 0.0;
  for (const auto& r : sorted) {
    if (r.epsilon <= 0.0) continue;
    const double d = std::abs(r.c - out.c_V);
    if (!(d > prev_pos)) out.converging = false;
    prev_pos = d;
  }
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (it->epsilon >= 0.0) continue;
    const double d = std::abs(it->c - out.c_V);
    if (!(d > prev_neg)) out.converging = false;
    prev_neg = d;
  }
  return out;
}

}  // namespace fracnls
