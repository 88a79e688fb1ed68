#include "fracnls/energy.hpp"

#include <cmath>

#include "fracnls/errors.hpp"

namespace fracnls {
namespace {

double kinetic_form(const Field& u, const Problem& prob) {
  const Spectrum uh = forward_transform(u);
  const auto sym = prob.symbol();
  double acc = 0.0;
  for (std::size_t s = 0; s < uh.size(); ++s) acc += sym[s] * std::norm(uh[s]);
  return acc / u.grid().length();
}

EnergyBreakdown assemble(const Field& u, const Problem& prob, std::span<const double> V) {
  EnergyBreakdown e;
  const auto& f = prob.nonlinearity();
  const double dx = u.grid().dx();
  double pot = 0.0, nl = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    pot += V[i] * u[i] * u[i];
    nl += f.F(u[i]);
  }
  e.kinetic = 0.5 * kinetic_form(u, prob);
  e.potential_term = 0.5 * dx * pot;
  e.nonlinear = dx * nl;
  e.total = e.kinetic + e.potential_term - e.nonlinear;
  return e;
}

}  // namespace

EnergyBreakdown evaluate_I(const Field& u, const Problem& prob) { return assemble(u, prob, prob.V_values()); }

EnergyBreakdown evaluate_I_infinity(const Field& u, const Problem& prob) {
  const std::vector<double> vinf(u.size(), prob.potential().V_inf());
  return assemble(u, prob, vinf);
}

Field gradient_I(const Field& u, const Problem& prob) {
  Field g = apply_real_multiplier(u, prob.symbol());
  const auto V = prob.V_values();
  const auto& f = prob.nonlinearity();
  for (std::size_t i = 0; i < u.size(); ++i) g[i] += V[i] * u[i] - f.f(u[i]);
  return g;
}

double x_norm_squared(const Field& u, const Problem& prob) {
  const auto V = prob.V_values();
  double pot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) pot += V[i] * u[i] * u[i];
  return kinetic_form(u, prob) + u.grid().dx() * pot;
}

double weak_residual_norm(const Field& u, const Problem& prob) {
  const double xn = std::sqrt(std::max(0.0, x_norm_squared(u, prob)));
  if (!(xn > 0.0)) throw PreconditionError("weak residual is undefined for the zero field");
  return norm_l2(gradient_I(u, prob)) / xn;
}

double nehari_functional(const Field& u, const Problem& prob) {
  const auto& f = prob.nonlinearity();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += f.f(u[i]) * u[i];
  return x_norm_squared(u, prob) - u.grid().dx() * acc;
}

}  // namespace fracnls
