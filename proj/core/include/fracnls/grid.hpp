#pragma once

// Uniform periodic discretisation of the real line and the Fourier-multiplier
// realisation of the Liouville-Weyl fractional derivatives.
//
// Transform convention (continuous Fourier transform approximated on [-L, L)):
//
//   u_hat(w_k) = dx * sum_j u(x_j) exp(-i w_k x_j),       x_j = -L + j dx
//   u(x_j)     = 1/(2L) * sum_k u_hat(w_k) exp(i w_k x_j),  w_k = pi k / L
//
// so that integrate(u^2) = 1/(2L) * sum_k |u_hat_k|^2 (discrete Parseval).

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fracnls {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

class Grid {
 public:
  /// Throws ConfigError unless L > 0, N even and N >= 8.
  Grid(double half_length, std::size_t n_points);

  double half_length() const { return data_->half_length; }
  std::size_t size() const { return data_->n_points; }
  double dx() const { return data_->dx; }
  double length() const { return 2.0 * data_->half_length; }

  double x(std::size_t i) const { return data_->points[i]; }
  std::span<const double> points() const { return data_->points; }

  /// w_k in standard DFT order: 0, pi/L, ..., (N/2-1)pi/L, -N/2 pi/L, ..., -pi/L.
  std::span<const double> frequencies() const { return data_->frequencies; }

  /// Signed mode index of DFT slot `slot`.
  long mode(std::size_t slot) const;
  std::size_t nyquist_slot() const { return data_->n_points / 2; }
  std::size_t center_index() const { return data_->n_points / 2; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.data_ == b.data_ ||
           (a.data_->half_length == b.data_->half_length && a.data_->n_points == b.data_->n_points);
  }

 private:
  struct Data {
    double half_length;
    std::size_t n_points;
    double dx;
    std::vector<double> points;
    std::vector<double> frequencies;
  };
  std::shared_ptr<const Data> data_;
};

Grid make_grid(double half_length, std::size_t n_points);

/// Real samples of a function on a Grid.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  template <class Fn>
  static Field sample(const Grid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.x(i));
    return Field(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator*(Field a, double s) { return a *= s; }

  /// this += s * other
  void axpy(double s, const Field& other);

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Real and imaginary parts of a complex-valued result on a Grid.
struct ComplexField {
  Field real;
  Field imag;
};

/// Order of the fractional derivative, restricted to (1/2, 1].
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

Spectrum forward_transform(const Field& u);
/// Complex samples of the inverse transform.
std::vector<Complex> inverse_transform(const Grid& grid, std::span<const Complex> spectrum);
/// Real part of the inverse transform as a Field.
Field inverse_transform_real(const Grid& grid, std::span<const Complex> spectrum);

/// Multiply the spectrum of u slot-wise by `symbol` (DFT order) and transform back.
ComplexField apply_multiplier(const Field& u, std::span<const Complex> symbol);
/// Real-symbol fast path; returns the real part only.
Field apply_real_multiplier(const Field& u, std::span<const double> symbol);

/// Symbol (i w)^alpha, principal branch, zero at w = 0 and at the Nyquist slot.
std::vector<Complex> left_lw_symbol(const Grid& grid, FractionalOrder alpha);
/// Symbol (-i w)^alpha with the same conventions.
std::vector<Complex> right_lw_symbol(const Grid& grid, FractionalOrder alpha);
/// Symbol |w|^(2 alpha) of the composed operator.
std::vector<double> composed_symbol(const Grid& grid, FractionalOrder alpha);

/// Left-sided derivative  _{-inf}D^alpha_x u.
ComplexField left_lw_derivative(const Field& u, FractionalOrder alpha);
/// Right-sided derivative  _xD^alpha_{inf} u.
ComplexField right_lw_derivative(const Field& u, FractionalOrder alpha);
/// _xD^alpha_inf ( _{-inf}D^alpha_x u ), symbol |w|^(2 alpha).
Field composed_operator(const Field& u, FractionalOrder alpha);

/// dx * sum(u).
double integrate(const Field& u);
double integrate(std::span<const double> values, double dx);
/// L2 inner product with the grid quadrature.
double dot(const Field& u, const Field& v);
double norm_l2(const Field& u);
double sup_norm(const Field& u);

/// Transfer u onto another grid by evaluating its trigonometric interpolant;
/// points of the target grid outside [-L, L) of the source are set to zero.
Field resample(const Field& u, const Grid& target);

}  // namespace fracnls
