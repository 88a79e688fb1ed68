#pragma once

// I(u) = 1/2 int (|D^a u|^2 + V u^2) - int F(u), its limit version with V = V_inf,
// the L2 representative of I'(u), and the weak-solution residual.

#include "fracnls/grid.hpp"
#include "fracnls/problem.hpp"

namespace fracnls {

struct EnergyBreakdown {
  double kinetic = 0.0;         ///< 1/2 int |D^a u|^2
  double potential_term = 0.0;  ///< 1/2 int V u^2
  double nonlinear = 0.0;       ///< int F(u)
  double total = 0.0;
};

EnergyBreakdown evaluate_I(const Field& u, const Problem& prob);
EnergyBreakdown evaluate_I_infinity(const Field& u, const Problem& prob);

/// g = composed_operator(u) + V u - f(u); <g, phi>_L2 = I'(u) phi on the grid.
Field gradient_I(const Field& u, const Problem& prob);

/// ||g||_L2 / ||u||_X. Throws PreconditionError for the zero field.
double weak_residual_norm(const Field& u, const Problem& prob);

/// I'(u) u = ||u||_X^2 - int f(u) u.
double nehari_functional(const Field& u, const Problem& prob);

/// ||u||_X^2 using the problem's sampled potential.
double x_norm_squared(const Field& u, const Problem& prob);

}  // namespace fracnls
