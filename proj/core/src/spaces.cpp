#include "fracnls/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fracnls/errors.hpp"

namespace fracnls {

double seminorm_alpha(const Field& u, FractionalOrder alpha) {
  const Spectrum uh = forward_transform(u);
  const auto sym = composed_symbol(u.grid(), alpha);
  double acc = 0.0;
  for (std::size_t s = 0; s < uh.size(); ++s) acc += sym[s] * std::norm(uh[s]);
  return std::sqrt(acc / u.grid().length());
}

double seminorm_alpha_physical(const Field& u, FractionalOrder alpha) {
  return std::sqrt(std::max(0.0, dot(u, composed_operator(u, alpha))));
}

double norm_alpha(const Field& u, FractionalOrder alpha) {
  const double l2 = norm_l2(u);
  const double semi = seminorm_alpha(u, alpha);
  return std::sqrt(l2 * l2 + semi * semi);
}

double inner_product_X(const Field& u, const Field& v, FractionalOrder alpha, const Potential& V) {
  const Spectrum uh = forward_transform(u);
  const Spectrum vh = forward_transform(v);
  const auto sym = composed_symbol(u.grid(), alpha);
  double kin = 0.0;
  for (std::size_t s = 0; s < uh.size(); ++s) kin += sym[s] * (uh[s] * std::conj(vh[s])).real();
  kin /= u.grid().length();
  const Grid& g = u.grid();
  double pot = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) pot += V(g.x(i)) * u[i] * v[i];
  return kin + g.dx() * pot;
}

double norm_X(const Field& u, FractionalOrder alpha, const Potential& V) {
  return std::sqrt(std::max(0.0, inner_product_X(u, u, alpha, V)));
}

NormReport norm_report(const Field& u, FractionalOrder alpha, const Potential& V) {
  NormReport r;
  r.l2 = norm_l2(u);
  r.seminorm_alpha = seminorm_alpha(u, alpha);
  r.norm_alpha = std::sqrt(r.l2 * r.l2 + r.seminorm_alpha * r.seminorm_alpha);
  r.norm_X = norm_X(u, alpha, V);
  r.sup_norm = sup_norm(u);
  return r;
}

double embedding_ratio(const Field& u, FractionalOrder alpha) {
  const double denom = norm_alpha(u, alpha);
  if (!(denom > 0.0)) throw PreconditionError("embedding ratio is undefined for the zero field");
  return sup_norm(u) / denom;
}

EmbeddingEstimate estimate_embedding_constant(const Grid& grid, FractionalOrder alpha, std::size_t samples,
                                              std::uint64_t seed, int max_mode) {
  if (2 * max_mode >= static_cast<int>(grid.size())) {
    throw ConfigError("embedding sweep bandwidth must stay below the grid Nyquist mode");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  EmbeddingEstimate est;
  const double k0 = std::numbers::pi / grid.half_length();
  std::vector<double> a(static_cast<std::size_t>(max_mode) + 1), b(a.size());
  for (std::size_t n = 0; n < samples; ++n) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = normal(rng);
      b[k] = normal(rng);
    }
    const Field u = Field::sample(grid, [&](double x) {
      double acc = a[0];
      for (std::size_t k = 1; k < a.size(); ++k) {
        const double kx = k0 * static_cast<double>(k) * x;
        acc += a[k] * std::cos(kx) + b[k] * std::sin(kx);
      }
      return acc;
    });
    est.max_ratio = std::max(est.max_ratio, embedding_ratio(u, alpha));
    ++est.samples;
  }
  return est;
}

}  // namespace fracnls
