#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fracnls/energy.hpp"
#include "fracnls/errors.hpp"
#include "fracnls/nehari.hpp"
#include "fracnls/rearrange.hpp"
#include "fracnls/spaces.hpp"
#include "fracnls_app/app.hpp"

namespace fracnls::app {
namespace {

using Results = std::vector<PropertyResult>;

constexpr std::uint64_t kSeed = 20240611;

/// Localized random field: Gaussian envelope times a random trigonometric sum.
Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double center = (unit(rng) - 0.5) * g.half_length();
  const double width = 0.5 + 3.0 * unit(rng);
  double a[6], b[6];
  for (int k = 0; k < 6; ++k) {
    a[k] = normal(rng);
    b[k] = normal(rng);
  }
  return Field::sample(g, [&](double x) {
    const double z = (x - center) / width;
    double s = 0.0;
    for (int k = 0; k < 6; ++k) s += a[k] * std::cos(0.7 * k * z) + b[k] * std::sin(0.7 * k * z);
    return s * std::exp(-z * z);
  });
}

/// Worst-case check: passes when worst <= bound; margin = bound - worst.
PropertyResult bounded(std::string name, double worst, double bound, std::string detail = {}) {
  return {std::move(name), worst <= bound, bound - worst, std::move(detail)};
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

Results spectral_suite() {
  Results out;
  std::mt19937_64 rng(kSeed);
  const Grid g(20.0, 512);

  double parseval = 0.0;
  for (int n = 0; n < 20; ++n) {
    const Field u = random_field(g, rng);
    const auto spec = forward_transform(u);
    double s = 0.0;
    for (const auto& c : spec) s += std::norm(c);
    const double lhs = dot(u, u);
    parseval = std::max(parseval, std::abs(lhs - s / g.length()) / lhs);
  }
  out.push_back(bounded("parseval", parseval, 1e-12, "20 random fields"));

  double roundtrip = 0.0;
  for (int n = 0; n < 20; ++n) {
    const Field u = random_field(g, rng);
    const Field back = inverse_transform_real(g, forward_transform(u));
    roundtrip = std::max(roundtrip, norm_l2(back - u) / norm_l2(u));
  }
  out.push_back(bounded("inverse_roundtrip", roundtrip, 1e-13));

  // Band-limited u with analytic second derivative.
  std::normal_distribution<double> normal(0.0, 1.0);
  double classical = 0.0;
  for (int n = 0; n < 10; ++n) {
    double a[8], b[8];
    for (int k = 0; k < 8; ++k) {
      a[k] = normal(rng);
      b[k] = normal(rng);
    }
    const double L = g.half_length();
    const Field u = Field::sample(g, [&](double x) {
      double s = 0.0;
      for (int k = 0; k < 8; ++k) {
        const double w = std::numbers::pi * (k + 1) / L;
        s += a[k] * std::cos(w * x) + b[k] * std::sin(w * x);
      }
      return s;
    });
    const Field upp = Field::sample(g, [&](double x) {
      double s = 0.0;
      for (int k = 0; k < 8; ++k) {
        const double w = std::numbers::pi * (k + 1) / L;
        s -= w * w * (a[k] * std::cos(w * x) + b[k] * std::sin(w * x));
      }
      return s;
    });
    const Field r = composed_operator(u, FractionalOrder(1.0)) + upp;
    classical = std::max(classical, norm_l2(r) / norm_l2(upp));
  }
  out.push_back(bounded("classical_limit_alpha_1", classical, 1e-8));

  const Field gauss = Field::sample(g, [](double x) { return std::exp(-x * x); });
  out.push_back(bounded("gaussian_quadrature", std::abs(integrate(gauss) - std::sqrt(std::numbers::pi)) / std::sqrt(std::numbers::pi), 1e-10));

  double composition = 0.0;
  for (double a : {0.6, 0.75, 0.9}) {
    const FractionalOrder alpha(a);
    const auto left = left_lw_symbol(g, alpha);
    const auto right = right_lw_symbol(g, alpha);
    const auto both = composed_symbol(g, alpha);
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (s == g.nyquist_slot()) continue;
      composition = std::max(composition, std::abs(left[s] * right[s] - both[s]) / std::max(1.0, both[s]));
    }
  }
  out.push_back(bounded("left_right_composition", composition, 1e-12, "symbol product vs |w|^2a"));
  return out;
}

Results spaces_suite() {
  Results out;
  std::mt19937_64 rng(kSeed + 1);
  const Grid g(20.0, 512);
  double equiv = 0.0;
  for (int n = 0; n < 100; ++n) {
    const FractionalOrder alpha(0.6 + 0.3 * (n % 3) / 2.0);
    const Field u = random_field(g, rng);
    const double a = seminorm_alpha(u, alpha);
    const double b = seminorm_alpha_physical(u, alpha);
    equiv = std::max(equiv, std::abs(a - b) / a);
  }
  out.push_back(bounded("seminorm_equivalence", equiv, 1e-9, "100 random fields"));

  const Potential V = Potential::from_expression("2 - 1/(1+t^2)", 1.0, 2.0, {true, true});
  double floor_gap = 0.0;
  double pythagoras = 0.0;
  for (int n = 0; n < 20; ++n) {
    const Field u = random_field(g, rng);
    const NormReport r = norm_report(u, FractionalOrder(0.75), V);
    floor_gap = std::max(floor_gap, std::sqrt(V.V0()) * r.l2 - r.norm_X);
    pythagoras = std::max(pythagoras, std::abs(r.norm_alpha * r.norm_alpha - r.l2 * r.l2 - r.seminorm_alpha * r.seminorm_alpha) /
                                          (r.norm_alpha * r.norm_alpha));
  }
  out.push_back(bounded("x_norm_dominates_floor", floor_gap, 0.0, "||u||_X >= sqrt(V0) ||u||_L2"));
  out.push_back(bounded("norm_decomposition", pythagoras, 1e-12));

  const auto coarse = estimate_embedding_constant(Grid(20.0, 256), FractionalOrder(0.75), 200, kSeed);
  const auto fine = estimate_embedding_constant(Grid(20.0, 512), FractionalOrder(0.75), 200, kSeed);
  const double spread = std::abs(coarse.max_ratio - fine.max_ratio) / fine.max_ratio;
  out.push_back(bounded("embedding_constant_grid_stable", spread, 1e-9,
                        "C = " + sci(fine.max_ratio) + " on 200 trigonometric polynomials"));
  return out;
}

Results nehari_suite() {
  Results out;
  std::mt19937_64 rng(kSeed + 2);
  const Grid g(20.0, 512);
  const Problem prob(FractionalOrder(0.75), g, Nonlinearity::power(3.0, 3.5), Potential::constant(1.0));
  double closed = 0.0;
  int multi_crossings = 0;
  double on_manifold = 0.0;
  double not_max = 0.0;
  for (int n = 0; n < 100; ++n) {
    Field u = random_field(g, rng);
    if (std::none_of(u.values().begin(), u.values().end(), [](double v) { return v > 0.0; })) u *= -1.0;
    const FiberingReport fr = nehari_project(u, prob);
    double q = 0.0;
    for (double v : u.values()) q += v > 0.0 ? v * v * v * v : 0.0;
    const double exact = std::sqrt(x_norm_squared(u, prob) / (g.dx() * q));
    closed = std::max(closed, std::abs(fr.sigma_u - exact) / exact);

    int changes = 0;
    double prev = fibering_mismatch(u, prob, exact * 1e-2);
    for (int k = 1; k <= 200; ++k) {
      const double s = exact * std::pow(10.0, -2.0 + 4.0 * k / 200.0);
      const double m = fibering_mismatch(u, prob, s);
      if ((m > 0.0) != (prev > 0.0)) ++changes;
      prev = m;
      not_max = std::max(not_max, (fibering_value(u, prob, s) - fr.psi_max) / std::abs(fr.psi_max));
    }
    if (changes != 1) ++multi_crossings;
    const Field w = fr.sigma_u * u;
    on_manifold = std::max(on_manifold, std::abs(nehari_functional(w, prob)) / x_norm_squared(w, prob));
  }
  out.push_back(bounded("sigma_closed_form_p3", closed, 1e-10, "100 random fields"));
  out.push_back(bounded("single_sign_change", multi_crossings, 0.0, "fields with != 1 crossing"));
  out.push_back(bounded("projection_on_manifold", on_manifold, 1e-10));
  out.push_back(bounded("psi_maximized_at_sigma", not_max, 1e-12, "relative to psi(sigma_u)"));

  const Field neg = Field::sample(g, [](double x) { return -std::exp(-x * x); });
  bool raised = false;
  try {
    nehari_project(neg, prob);
  } catch (const NoProjectionError&) {
    raised = true;
  }
  out.push_back({"no_projection_for_nonpositive", raised, raised ? 0.0 : -1.0, {}});
  return out;
}

Results rearrange_suite() {
  Results out;
  std::mt19937_64 rng(kSeed + 3);
  const Grid g(20.0, 512);
  double lq = 0.0, idem = 0.0, phi = 0.0;
  long order_breaks = 0;
  long ps_violations = 0;
  double ps_margin = 1e300;
  for (int n = 0; n < 100; ++n) {
    const Field u = random_field(g, rng);
    const RearrangementReport rep = rearrange(u);
    for (const auto& [q, d] : rep.lp_drift) lq = std::max(lq, d);
    idem = std::max(idem, norm_l2(symmetric_decreasing(rep.u_star) - rep.u_star));
    Field sq(g);
    for (std::size_t i = 0; i < g.size(); ++i) sq[i] = u[i] * u[i];
    const Field sq_star = symmetric_decreasing(sq);
    for (std::size_t i = 0; i < g.size(); ++i) {
      phi = std::max(phi, std::abs(sq_star[i] - rep.u_star[i] * rep.u_star[i]));
    }
    const auto slots = center_out_order(g);
    for (std::size_t r = 1; r < slots.size(); ++r) {
      if (rep.u_star[slots[r]] > rep.u_star[slots[r - 1]]) ++order_breaks;
    }
    for (double a : {0.6, 0.75, 0.9}) {
      const PolyaSzegoCheck ps = polya_szego_check(u, FractionalOrder(a));
      if (!ps.passed) ++ps_violations;
      ps_margin = std::min(ps_margin, ps.margin / ps.rhs);
    }
  }
  out.push_back(bounded("lq_norms_preserved", lq, 1e-12, "q = 1, 2, 4"));
  out.push_back(bounded("idempotent", idem, 0.0));
  out.push_back(bounded("square_commutes", phi, 0.0));
  out.push_back(bounded("monotone_center_out", static_cast<double>(order_breaks), 0.0));
  out.push_back({"polya_szego", ps_violations == 0, ps_margin, "min relative margin over 300 cases"});

  const Field gauss = Field::sample(g, [](double x) { return std::exp(-x * x); });
  const LayerCakeCheck lc = layer_cake_check(gauss, 1000);
  out.push_back(bounded("layer_cake_reconstruction", lc.max_deviation, sup_norm(gauss) / 1000.0));
  out.push_back({"level_sets_equal", lc.level_sets_equal, 0.0, std::to_string(lc.thresholds_checked) + " thresholds"});

  const Potential V = Potential::from_expression("2 - 1/(1+t^2)", 1.0, 2.0, {true, true});
  long pm_fail = 0;
  for (int n = 0; n < 20; ++n) {
    Field u = random_field(g, rng);
    for (auto& v : u.values()) v = std::abs(v);
    if (!potential_monotonicity_check(u, V).passed) ++pm_fail;
  }
  out.push_back(bounded("potential_term_not_raised", static_cast<double>(pm_fail), 0.0));
  return out;
}

Results theorems_suite() {
  Results out;
  const Grid g(20.0, 512);
  const Problem canonical(FractionalOrder(0.75), g, Nonlinearity::power(3.0, 3.5), Potential::constant(1.0));
  SolverConfig cfg;
  cfg.compute_c_infinity = false;

  const GroundStateReport r = ground_state(canonical, cfg);
  out.push_back({"canonical_converges", r.converged, cfg.grad_tol - r.residual, "residual " + sci(r.residual)});
  out.push_back(bounded("nonnegativity", r.nonneg_violation, 1e-6));

  const std::vector<double> eps{0.05, 0.1, 0.2, 0.4};
  const ContinuitySweep sw = continuity_sweep(canonical.potential(), eps, canonical, cfg);
  double min_step = sw.rows.front().c - sw.c_V;
  for (std::size_t i = 1; i < sw.rows.size(); ++i) min_step = std::min(min_step, sw.rows[i].c - sw.rows[i - 1].c);
  out.push_back({"level_monotone_in_epsilon", min_step > 1e-6, min_step - 1e-6, {}});
  out.push_back({"level_continuous_at_zero", sw.converging, 0.0, {}});

  const Potential V = Potential::from_expression("2 - 1/(1+t^2)", 1.0, 2.0, {true, true});
  const Problem attained = canonical.with_potential(V);
  const CInfinityComparison cmp = compare_c_to_c_infinity(attained, cfg);
  out.push_back({"c_below_c_infinity", cmp.gap >= 10.0 * cmp.tol && cmp.converged, cmp.gap - 10.0 * cmp.tol,
                 "gap " + sci(cmp.gap)});

  const GroundStateReport rs = ground_state(attained, cfg);
  const SymmetryDiagnostic sd = symmetry_diagnostic(rs, attained);
  out.push_back(bounded("symmetry_defect", sd.defect, 1e-3));
  out.push_back({"rearrangement_not_raising_energy", sd.energy_not_raised, sd.energy_u - sd.energy_u_star, {}});
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"spectral", "spaces", "nehari", "rearrange", "theorems"};
  return names;
}

std::vector<PropertyResult> run_suite(const std::string& suite) {
  if (suite == "spectral") return spectral_suite();
  if (suite == "spaces") return spaces_suite();
  if (suite == "nehari") return nehari_suite();
  if (suite == "rearrange") return rearrange_suite();
  if (suite == "theorems") return theorems_suite();
  throw ConfigError("unknown suite '" + suite + "' (spectral, spaces, nehari, rearrange, theorems)");
}

}  // namespace fracnls::app
