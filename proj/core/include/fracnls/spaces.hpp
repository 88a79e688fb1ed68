#pragma once

#include <cstddef>
#include <cstdint>

#include "fracnls/grid.hpp"
#include "fracnls/problem.hpp"

namespace fracnls {

struct NormReport {
  double l2 = 0.0;
  double seminorm_alpha = 0.0;
  double norm_alpha = 0.0;
  double norm_X = 0.0;
  double sup_norm = 0.0;
};

/// |u|_alpha = || |w|^alpha u_hat ||, evaluated as a frequency sum.
double seminorm_alpha(const Field& u, FractionalOrder alpha);
/// sqrt( integrate(u * composed_operator(u)) ): the same quantity on the physical side.
double seminorm_alpha_physical(const Field& u, FractionalOrder alpha);
double norm_alpha(const Field& u, FractionalOrder alpha);

/// <u, v>_X = integral of D^a u D^a v + V u v; the first term is taken frequency-side.
double inner_product_X(const Field& u, const Field& v, FractionalOrder alpha, const Potential& V);
double norm_X(const Field& u, FractionalOrder alpha, const Potential& V);

NormReport norm_report(const Field& u, FractionalOrder alpha, const Potential& V);

/// ||u||_inf / ||u||_alpha. Throws PreconditionError for the zero field.
double embedding_ratio(const Field& u, FractionalOrder alpha);

struct EmbeddingEstimate {
  double max_ratio = 0.0;
  std::size_t samples = 0;
};

/// Largest embedding_ratio over `samples` random trigonometric polynomials with
/// modes |k| <= max_mode (the same functions for any grid with N/2 > max_mode).
EmbeddingEstimate estimate_embedding_constant(const Grid& grid, FractionalOrder alpha, std::size_t samples,
                                              std::uint64_t seed, int max_mode = 16);

}  // namespace fracnls
