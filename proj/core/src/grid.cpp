#include "fracnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "fracnls/errors.hpp"

namespace fracnls {
namespace {

constexpr double kPi = std::numbers::pi;

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw PreconditionError("fields live on different grids");
}

std::vector<Complex> raw_forward(std::span<const double> values) {
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out(values.size());
  detail::dft_forward(in, out);
  return out;
}

// exp(i pi k) for the signed mode k; relates raw DFT coefficients to the
// continuous-transform approximation centred on x_0 = -L.
double offset_phase(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

Grid::Grid(double half_length, std::size_t n_points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    std::ostringstream msg;
    msg << "grid half-length must be positive and finite, got " << half_length;
    throw ConfigError(msg.str());
  }
  if (n_points % 2 != 0 || n_points < 8) {
    std::ostringstream msg;
    msg << "grid size must be an even integer >= 8, got " << n_points;
    throw ConfigError(msg.str());
  }
  Data d;
  d.half_length = half_length;
  d.n_points = n_points;
  d.dx = 2.0 * half_length / static_cast<double>(n_points);
  d.points.resize(n_points);
  d.frequencies.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    d.points[i] = -half_length + static_cast<double>(i) * d.dx;
  }
  const long half = static_cast<long>(n_points / 2);
  for (std::size_t s = 0; s < n_points; ++s) {
    const long k = static_cast<long>(s) < half ? static_cast<long>(s) : static_cast<long>(s) - static_cast<long>(n_points);
    d.frequencies[s] = kPi * static_cast<double>(k) / half_length;
  }
  data_ = std::make_shared<const Data>(std::move(d));
}

long Grid::mode(std::size_t slot) const {
  const auto n = static_cast<long>(size());
  const auto s = static_cast<long>(slot);
  return s < n / 2 ? s : s - n;
}

Grid make_grid(double half_length, std::size_t n_points) { return Grid(half_length, n_points); }

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ConfigError("field length does not match grid size");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ConfigError("field values must be finite");
  }
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void Field::axpy(double s, const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
}

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "fractional order must lie in (1/2, 1], got " << alpha;
    throw ConfigError(msg.str());
  }
}

Spectrum forward_transform(const Field& u) {
  const Grid& g = u.grid();
  Spectrum out = raw_forward(u.values());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] *= g.dx() * offset_phase(g.mode(s));
  return out;
}

std::vector<Complex> inverse_transform(const Grid& grid, std::span<const Complex> spectrum) {
  const std::size_t n = grid.size();
  std::vector<Complex> in(n);
  for (std::size_t s = 0; s < n; ++s) in[s] = spectrum[s] * offset_phase(grid.mode(s));
  std::vector<Complex> out(n);
  detail::dft_backward(in, out);
  const double scale = 1.0 / grid.length();
  for (auto& v : out) v *= scale;
  return out;
}

Field inverse_transform_real(const Grid& grid, std::span<const Complex> spectrum) {
  const auto z = inverse_transform(grid, spectrum);
  std::vector<double> re(z.size());
  std::transform(z.begin(), z.end(), re.begin(), [](Complex c) { return c.real(); });
  return Field(grid, std::move(re));
}

ComplexField apply_multiplier(const Field& u, std::span<const Complex> symbol) {
  const Grid& g = u.grid();
  const std::size_t n = g.size();
  std::vector<Complex> c = raw_forward(u.values());
  for (std::size_t s = 0; s < n; ++s) c[s] *= symbol[s];
  std::vector<Complex> out(n);
  detail::dft_backward(c, out);
  std::vector<double> re(n), im(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = out[i].real() * scale;
    im[i] = out[i].imag() * scale;
  }
  return {Field(g, std::move(re)), Field(g, std::move(im))};
}

Field apply_real_multiplier(const Field& u, std::span<const double> symbol) {
  const Grid& g = u.grid();
  const std::size_t n = g.size();
  std::vector<Complex> c = raw_forward(u.values());
  for (std::size_t s = 0; s < n; ++s) c[s] *= symbol[s];
  std::vector<Complex> out(n);
  detail::dft_backward(c, out);
  std::vector<double> re(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) re[i] = out[i].real() * scale;
  return Field(g, std::move(re));
}

namespace {

std::vector<Complex> one_sided_symbol(const Grid& grid, FractionalOrder alpha, double side) {
  const auto w = grid.frequencies();
  const double a = alpha.value();
  std::vector<Complex> sym(w.size());
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w[s] == 0.0 || s == grid.nyquist_slot()) {
      sym[s] = 0.0;
      continue;
    }
    const double sgn = side * (w[s] > 0.0 ? 1.0 : -1.0);
    sym[s] = std::polar(std::pow(std::abs(w[s]), a), a * 0.5 * kPi * sgn);
  }
  return sym;
}

}  // namespace

std::vector<Complex> left_lw_symbol(const Grid& grid, FractionalOrder alpha) {
  return one_sided_symbol(grid, alpha, 1.0);
}

std::vector<Complex> right_lw_symbol(const Grid& grid, FractionalOrder alpha) {
  return one_sided_symbol(grid, alpha, -1.0);
}

std::vector<double> composed_symbol(const Grid& grid, FractionalOrder alpha) {
  const auto w = grid.frequencies();
  std::vector<double> sym(w.size());
  const double e = 2.0 * alpha.value();
  for (std::size_t s = 0; s < w.size(); ++s) sym[s] = w[s] == 0.0 ? 0.0 : std::pow(std::abs(w[s]), e);
  return sym;
}

ComplexField left_lw_derivative(const Field& u, FractionalOrder alpha) {
  return apply_multiplier(u, left_lw_symbol(u.grid(), alpha));
}

ComplexField right_lw_derivative(const Field& u, FractionalOrder alpha) {
  return apply_multiplier(u, right_lw_symbol(u.grid(), alpha));
}

Field composed_operator(const Field& u, FractionalOrder alpha) {
  return apply_real_multiplier(u, composed_symbol(u.grid(), alpha));
}

double integrate(std::span<const double> values, double dx) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return dx * sum;
}

double integrate(const Field& u) { return integrate(u.values(), u.grid().dx()); }

double dot(const Field& u, const Field& v) {
  require_same_grid(u.grid(), v.grid());
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return u.grid().dx() * sum;
}

double norm_l2(const Field& u) { return std::sqrt(dot(u, u)); }

double sup_norm(const Field& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

Field resample(const Field& u, const Grid& target) {
  const Grid& src = u.grid();
  if (src == target) return u;

  // Same spacing, wider or narrower window: copy overlapping samples.
  const double shift = (target.half_length() - src.half_length()) / src.dx();
  if (std::abs(target.dx() - src.dx()) <= 1e-14 * src.dx() && std::abs(shift - std::round(shift)) < 1e-9) {
    const long offset = std::lround(shift);
    std::vector<double> out(target.size(), 0.0);
    for (std::size_t j = 0; j < target.size(); ++j) {
      const long i = static_cast<long>(j) - offset;
      if (i >= 0 && i < static_cast<long>(src.size())) out[j] = u[static_cast<std::size_t>(i)];
    }
    return Field(target, std::move(out));
  }

  const std::size_t n = src.size();
  const std::size_t m = target.size();

  // Same window, finer or coarser sampling: zero-pad or truncate the spectrum.
  if (target.half_length() == src.half_length()) {
    std::vector<Complex> c = raw_forward(u.values());
    std::vector<Complex> big(m, Complex{});
    const long lim = static_cast<long>(std::min(n, m) / 2);
    for (std::size_t s = 0; s < n; ++s) {
      const long k = src.mode(s);
      if (std::labs(k) >= lim) continue;
      const std::size_t t = k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(static_cast<long>(m) + k);
      big[t] = c[s] * (static_cast<double>(m) / static_cast<double>(n));
    }
    // Split the unpaired Nyquist coefficient of the coarser grid symmetrically.
    if (m > n) {
      const Complex nyq = c[src.nyquist_slot()] * (0.5 * static_cast<double>(m) / static_cast<double>(n));
      big[n / 2] += nyq;
      big[m - n / 2] += nyq;
    }
    std::vector<Complex> out(m);
    detail::dft_backward(big, out);
    std::vector<double> re(m);
    for (std::size_t j = 0; j < m; ++j) re[j] = out[j].real() / static_cast<double>(m);
    return Field(target, std::move(re));
  }

  // General case: direct evaluation of the trigonometric interpolant.
  const Spectrum uh = forward_transform(u);
  const auto w = src.frequencies();
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = target.x(j);
    if (x < -src.half_length() || x >= src.half_length()) continue;
    double acc = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (s == src.nyquist_slot()) {
        acc += uh[s].real() * std::cos(w[s] * x);
      } else {
        const Complex e = std::polar(1.0, w[s] * x);
        acc += (uh[s] * e).real();
      }
    }
    out[j] = acc / src.length();
  }
  return Field(target, std::move(out));
}

}  // namespace fracnls
