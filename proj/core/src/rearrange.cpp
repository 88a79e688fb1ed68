#include "fracnls/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracnls/errors.hpp"
#include "fracnls/spaces.hpp"

namespace fracnls {
namespace {

double lq_norm(std::span<const double> v, double dx, int q) {
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x), q);
  return std::pow(dx * acc, 1.0 / q);
}

void require_nonnegative(const Field& u, const char* who) {
  for (double v : u.values()) {
    if (v < 0.0) throw PreconditionError(std::string(who) + " requires a nonnegative field");
  }
}

}  // namespace

std::vector<std::size_t> center_out_order(const Grid& grid) {
  const std::size_t n = grid.size();
  const std::size_t c = grid.center_index();
  std::vector<std::size_t> order;
  order.reserve(n);
  order.push_back(c);
  for (std::size_t k = 1; k <= c; ++k) {
    order.push_back(c - k);
    if (c + k < n) order.push_back(c + k);
  }
  return order;
}

Field symmetric_decreasing(const Field& u) {
  const std::size_t n = u.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(u[a]) > std::abs(u[b]); });
  const auto slots = center_out_order(u.grid());
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[slots[r]] = std::abs(u[idx[r]]);
  return Field(u.grid(), std::move(out));
}

RearrangementReport rearrange(const Field& u, std::optional<FractionalOrder> alpha, const Potential* V) {
  RearrangementReport rep{symmetric_decreasing(u), {}, std::nullopt, std::nullopt};
  const double dx = u.grid().dx();
  for (int q : {1, 2, 4}) {
    const double a = lq_norm(u.values(), dx, q);
    const double b = lq_norm(rep.u_star.values(), dx, q);
    rep.lp_drift[q] = a > 0.0 ? std::abs(a - b) / a : std::abs(b);
  }
  if (V != nullptr) {
    const auto vs = V->sample(u.grid());
    double before = 0.0, after = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      before += vs[i] * u[i] * u[i];
      after += vs[i] * rep.u_star[i] * rep.u_star[i];
    }
    rep.potential_gain = dx * (before - after);
  }
  if (alpha) {
    const double a = seminorm_alpha(u, *alpha);
    const double b = seminorm_alpha(rep.u_star, *alpha);
    rep.seminorm_gain = a * a - b * b;
  }
  return rep;
}

PolyaSzegoCheck polya_szego_check(const Field& u, FractionalOrder alpha, double slack) {
  const double rhs = std::pow(seminorm_alpha(u, alpha), 2);
  const double lhs = std::pow(seminorm_alpha(symmetric_decreasing(u), alpha), 2);
  return {lhs, rhs, rhs - lhs, lhs <= rhs + slack * rhs};
}

PotentialMonotonicityCheck potential_monotonicity_check(const Field& u, const Potential& V) {
  if (!V.flags().radial_increasing) {
    throw PreconditionError("potential monotonicity needs a potential flagged radial_increasing");
  }
  require_nonnegative(u, "potential monotonicity check");
  const Field us = symmetric_decreasing(u);
  const auto vs = V.sample(u.grid());
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    lhs += vs[i] * us[i] * us[i];
    rhs += vs[i] * u[i] * u[i];
  }
  const double dx = u.grid().dx();
  lhs *= dx;
  rhs *= dx;
  return {lhs, rhs, lhs <= rhs + 1e-12 * std::abs(rhs)};
}

LayerCakeCheck layer_cake_check(const Field& u, int levels) {
  if (levels < 1) throw ConfigError("layer-cake reconstruction needs at least one level");
  require_nonnegative(u, "layer-cake check");
  LayerCakeCheck out;
  const double top = sup_norm(u);
  if (top == 0.0) {
    out.level_sets_equal = true;
    return out;
  }
  const double dt = top / levels;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double rebuilt = 0.0;
    for (int j = 1; j <= levels; ++j) {
      if (u[i] >= j * dt) rebuilt += dt;
    }
    out.max_deviation = std::max(out.max_deviation, std::abs(u[i] - rebuilt));
  }

  const Field us = symmetric_decreasing(u);
  out.level_sets_equal = true;
  constexpr int kThresholds = 50;
  for (int j = 0; j < kThresholds; ++j) {
    const double t = top * (j + 0.5) / kThresholds;
    const auto above_u = std::count_if(u.values().begin(), u.values().end(), [t](double v) { return v > t; });
    const auto above_s = std::count_if(us.values().begin(), us.values().end(), [t](double v) { return v > t; });
    if (above_u != above_s) out.level_sets_equal = false;
    ++out.thresholds_checked;
  }
  return out;
}

}  // namespace fracnls
