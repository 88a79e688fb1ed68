#pragma once

// Symmetric decreasing rearrangement on the periodic grid.
//
// |u| is sorted in decreasing order (ties by original index) and laid out
// centre-out: N/2, N/2-1, N/2+1, N/2-2, ... , ending at index 0. On an even
// grid this leaves u* symmetric about x = 0 up to the single unpaired point
// x = -L, which always receives the smallest value.

#include <map>
#include <optional>
#include <vector>

#include "fracnls/grid.hpp"
#include "fracnls/problem.hpp"

namespace fracnls {

struct RearrangementReport {
  Field u_star;
  std::map<int, double> lp_drift;       ///< q -> relative change of ||.||_Lq, q in {1, 2, 4}
  std::optional<double> potential_gain; ///< int V u^2 - int V (u*)^2
  std::optional<double> seminorm_gain;  ///< |u|_a^2 - |u*|_a^2
};

/// Grid indices ordered centre-out.
std::vector<std::size_t> center_out_order(const Grid& grid);

/// u* alone.
Field symmetric_decreasing(const Field& u);

/// u* with the L^q drifts; gains are filled when alpha / V are supplied.
RearrangementReport rearrange(const Field& u, std::optional<FractionalOrder> alpha = std::nullopt,
                              const Potential* V = nullptr);

struct PolyaSzegoCheck {
  double lhs = 0.0;     ///< |u*|_a^2
  double rhs = 0.0;     ///< |u|_a^2
  double margin = 0.0;  ///< rhs - lhs
  bool passed = false;  ///< lhs <= rhs + slack * rhs
};

PolyaSzegoCheck polya_szego_check(const Field& u, FractionalOrder alpha, double slack = 1e-9);

struct PotentialMonotonicityCheck {
  double lhs = 0.0;  ///< int V (u*)^2
  double rhs = 0.0;  ///< int V u^2
  bool passed = false;
};

/// Requires V flagged radial_increasing and u >= 0 (PreconditionError otherwise).
PotentialMonotonicityCheck potential_monotonicity_check(const Field& u, const Potential& V);

struct LayerCakeCheck {
  double max_deviation = 0.0;   ///< sup |u - sum_j dt chi{u >= j dt}|
  bool level_sets_equal = false;
  std::size_t thresholds_checked = 0;
};

/// Layer-cake reconstruction with `levels` equal slabs of height ||u||_inf / levels,
/// plus cell-count equality |{u* > t}| = |{u > t}| at 50 thresholds.
/// Requires u >= 0 (PreconditionError otherwise).
LayerCakeCheck layer_cake_check(const Field& u, int levels);

}  // namespace fracnls
