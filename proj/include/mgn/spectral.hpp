#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace mgn {

namespace detail {
struct FftPlans;
}

/// Periodic 1-D collocation grid on [-half_length, half_length).
///
/// Nodes are x_j = -L/2 + j L/n. The half-spectrum index m = 0..n/2 carries
/// wavenumber k_m = 2 pi m / L; m = n/2 is the Nyquist mode. Copies share
/// the underlying FFTW plans, which are only ever executed through the
/// thread-safe new-array interface.
class Grid {
 public:
  Grid(std::size_t n, double half_length);

  std::size_t size() const { return n_; }
  std::size_t num_modes() const { return n_ / 2 + 1; }
  std::size_t nyquist() const { return n_ / 2; }
  double half_length() const { return half_length_; }
  double length() const { return 2.0 * half_length_; }
  double dx() const { return length() / static_cast<double>(n_); }
  double node(std::size_t j) const;
  double wavenumber(std::size_t m) const;
  double dk() const;
  std::vector<double> nodes() const;

  /// Unnormalized forward transform, n reals -> n/2+1 coefficients.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Inverse transform including the 1/n factor. `in` is clobbered.
  void backward(std::span<std::complex<double>> in, std::span<double> out) const;

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && half_length_ == other.half_length_;
  }

 private:
  std::size_t n_;
  double half_length_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// Real samples of a function on a Grid.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  static Field from_function(const Grid& grid, const std::function<double(double)>& f);
  static Field constant(const Grid& grid, double value);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t j) { return values_[j]; }
  double operator[](std::size_t j) const { return values_[j]; }

  double max_abs() const;
  double min() const;
  double max() const;

  /// Throws CorruptionError if any sample is NaN or Inf.
  void check_finite(const char* what) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(const Field& other);
  Field& operator*=(double scale);

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);
Field operator/(Field a, const Field& b);
Field operator-(Field a);

/// Real even Fourier symbol sampled on the nonnegative wavenumber ladder.
class Symbol {
 public:
  explicit Symbol(std::vector<double> values) : values_(std::move(values)) {}

  /// Samples `s` at every ladder wavenumber. Throws DomainError if s(k) and
  /// s(-k) disagree anywhere on the ladder.
  static Symbol sample(const Grid& grid, const std::function<double(double)>& s);
  static Symbol ones(const Grid& grid);

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t m) const { return values_[m]; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// f -> S f, with S diagonal in Fourier space. The Nyquist mode is kept.
Field apply_symbol(const Field& f, const Symbol& s);

/// Spectral derivative. The Nyquist mode of the result is zero.
Field ddx(const Field& f);

/// d/dx composed with the multiplier `s` (one transform pair).
Field ddx_symbol(const Field& f, const Symbol& s);

/// Rectangle-rule quadrature (L/n) sum f_j g_j.
double inner(const Field& f, const Field& g);

/// Quadrature of f over the period.
double integrate(const Field& f);

/// Spectral coefficients normalized so that sin(k x) has |c_k| = 1/2.
std::vector<std::complex<double>> normalized_spectrum(const Field& f);

/// 2/3-rule mask: 1 for m <= n/3, 0 above.
Symbol two_thirds_filter(const Grid& grid);

}  // namespace mgn
