#include "mgn/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mgn/errors.hpp"

namespace mgn {

namespace detail {

struct FftPlans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit FftPlans(std::size_t n) {
    // Plans are created on scratch arrays with FFTW_UNALIGNED so that the
    // new-array execute functions may be called on any std::vector buffer.
    const int size = static_cast<int>(n);
    double* real = fftw_alloc_real(n);
    fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
    r2c = fftw_plan_dft_r2c_1d(size, real, spec, FFTW_ESTIMATE | FFTW_UNALIGNED);
    c2r = fftw_plan_dft_c2r_1d(size, spec, real,
                               FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
    fftw_free(spec);
    fftw_free(real);
  }
  ~FftPlans() {
    fftw_destroy_plan(c2r);
    fftw_destroy_plan(r2c);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

namespace {

// The FFTW planner is not thread-safe; plan creation and the plan cache are
// serialized here.
std::shared_ptr<const FftPlans> plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_shared<const FftPlans>(n);
  }
  return slot;
}

}  // namespace
}  // namespace detail

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) {
    throw DomainError("fields live on different grids");
  }
}

}  // namespace

Grid::Grid(std::size_t n, double half_length) : n_(n), half_length_(half_length) {
  if (!is_power_of_two(n) || n < 8) {
    throw ValidationError("n", "grid size must be a power of two >= 8");
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ValidationError("half_length", "must be positive and finite");
  }
  plans_ = detail::plans_for(n);
}

double Grid::node(std::size_t j) const {
  return -half_length_ + static_cast<double>(j) * dx();
}

double Grid::dk() const { return 2.0 * std::numbers::pi / length(); }

double Grid::wavenumber(std::size_t m) const { return static_cast<double>(m) * dk(); }

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    x[j] = node(j);
  }
  return x;
}

void Grid::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  // r2c does not modify its input.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Grid::backward(std::span<std::complex<double>> in, std::span<double> out) const {
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) {
    v *= scale;
  }
}

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DomainError("field size does not match grid size");
  }
}

Field Field::from_function(const Grid& grid, const std::function<double(double)>& f) {
  Field out(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out.values_[j] = f(grid.node(j));
  }
  return out;
}

Field Field::constant(const Grid& grid, double value) {
  return Field(grid, std::vector<double>(grid.size(), value));
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

void Field::check_finite(const char* what) const {
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw CorruptionError(std::string(what) + ": non-finite value in field");
    }
  }
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] *= other.values_[j];
  return *this;
}

Field& Field::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, const Field& b) { return a *= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }
Field operator-(Field a) { return a *= -1.0; }

Field operator/(Field a, const Field& b) {
  require_same_grid(a, b);
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t j = 0; j < va.size(); ++j) va[j] /= vb[j];
  return a;
}

Symbol Symbol::sample(const Grid& grid, const std::function<double(double)>& s) {
  std::vector<double> values(grid.num_modes());
  for (std::size_t m = 0; m < values.size(); ++m) {
    const double k = grid.wavenumber(m);
    const double plus = s(k);
    const double minus = s(-k);
    if (plus != minus) {
      throw DomainError("symbol is not even at k = " + std::to_string(k));
    }
    values[m] = plus;
  }
  return Symbol(std::move(values));
}

Symbol Symbol::ones(const Grid& grid) {
  return Symbol(std::vector<double>(grid.num_modes(), 1.0));
}

namespace {

// Transforms f, multiplies mode m by `mult(m, coefficient)` and transforms back.
template <typename Multiplier>
Field spectral_map(const Field& f, Multiplier mult) {
  f.check_finite("spectral operator input");
  const Grid& grid = f.grid();
  std::vector<std::complex<double>> coeffs(grid.num_modes());
  grid.forward(f.values(), coeffs);
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    coeffs[m] = mult(m, coeffs[m]);
  }
  Field out(grid);
  grid.backward(coeffs, out.values());
  return out;
}

void require_symbol_size(const Field& f, const Symbol& s) {
  if (s.size() != f.grid().num_modes()) {
    throw DomainError("symbol was sampled on a different grid");
  }
}

}  // namespace

Field apply_symbol(const Field& f, const Symbol& s) {
  require_symbol_size(f, s);
  return spectral_map(f, [&](std::size_t m, std::complex<double> c) { return s[m] * c; });
}

Field ddx(const Field& f) {
  const Grid& grid = f.grid();
  const std::size_t nyq = grid.nyquist();
  return spectral_map(f, [&](std::size_t m, std::complex<double> c) {
    if (m == nyq) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, grid.wavenumber(m)) * c;
  });
}

Field ddx_symbol(const Field& f, const Symbol& s) {
  require_symbol_size(f, s);
  const Grid& grid = f.grid();
  const std::size_t nyq = grid.nyquist();
  return spectral_map(f, [&](std::size_t m, std::complex<double> c) {
    if (m == nyq) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, grid.wavenumber(m) * s[m]) * c;
  });
}

double inner(const Field& f, const Field& g) {
  require_same_grid(f, g);
  long double sum = 0.0L;
  auto a = f.values();
  auto b = g.values();
  for (std::size_t j = 0; j < a.size(); ++j) {
    sum += static_cast<long double>(a[j]) * b[j];
  }
  return static_cast<double>(sum) * f.grid().dx();
}

double integrate(const Field& f) {
  long double sum = 0.0L;
  for (double v : f.values()) sum += v;
  return static_cast<double>(sum) * f.grid().dx();
}

std::vector<std::complex<double>> normalized_spectrum(const Field& f) {
  const Grid& grid = f.grid();
  std::vector<std::complex<double>> coeffs(grid.num_modes());
  grid.forward(f.values(), coeffs);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : coeffs) c *= scale;
  return coeffs;
}

Symbol two_thirds_filter(const Grid& grid) {
  std::vector<double> mask(grid.num_modes(), 0.0);
  const std::size_t cutoff = grid.size() / 3;
  for (std::size_t m = 0; m <= cutoff && m < mask.size(); ++m) mask[m] = 1.0;
  return Symbol(std::move(mask));
}

}  // namespace mgn
