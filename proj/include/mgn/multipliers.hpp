#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mgn/spectral.hpp"

namespace mgn {

enum class Layer { Upper = 1, Lower = 2 };

/// Piecewise-linear symbol tables F1(xi), F2(xi) on xi >= 0, extended evenly
/// and held constant beyond the last abscissa.
struct CustomTable {
  std::vector<double> xi;
  std::vector<double> f1;
  std::vector<double> f2;
  std::string source;

  double eval(Layer layer, double x) const;
};

/// Parses a two-column (xi, F) or three-column (xi, F1, F2) CSV table. A
/// non-numeric first line is treated as a header. Throws ParseError or
/// ValidationError (F(0) != 1, negative or unsorted abscissae).
CustomTable parse_custom_table(const std::string& text, const std::string& source = "");
CustomTable load_custom_table(const std::string& path);

enum class MultiplierKind { Identity, Regularized, Improved, Custom };

/// Which Fourier multiplier family F_i(sqrt(mu) D) closes the model.
struct MultiplierSpec {
  MultiplierKind kind = MultiplierKind::Identity;
  double theta1 = 1.0 / 15.0;
  double theta2 = 1.0 / 15.0;
  std::shared_ptr<const CustomTable> table;

  static MultiplierSpec identity();
  static MultiplierSpec regularized(double theta1, double theta2);
  /// theta_i = 1 / (15 delta_i^2), delta_1 = 1, delta_2 = delta.
  static MultiplierSpec regularized_natural(double delta);
  static MultiplierSpec improved();
  static MultiplierSpec custom(CustomTable table);

  /// "id", "reg", "imp" or "custom:<source>".
  std::string name() const;
  void validate() const;
};

/// F_i(sqrt(mu) k). `delta` enters only through the improved family's
/// per-layer depth convention (delta_1 = 1, delta_2 = delta).
double eval_F(const MultiplierSpec& spec, Layer layer, double k, double mu, double delta);

/// F_i on the nonnegative ladder of `grid`, ready for apply_symbol.
Symbol layer_symbol(const Grid& grid, const MultiplierSpec& spec, Layer layer, double mu,
                    double delta);

/// Improved-family F^2(x) = 3/(x tanh x) - 3/x^2 with a Taylor branch near 0.
double improved_F_squared(double x);
/// |x| below which improved_F_squared uses its series.
inline constexpr double kImprovedSeriesSwitch = 0.5;

struct AdmissibilityReport {
  bool subadditive_ok = true;
  /// min over sampled pairs of |k|F(k) + |l|F(l) - |k+l|F(k+l).
  double worst_violation = 0.0;
  double worst_k = 0.0;
  double worst_l = 0.0;
  std::size_t pairs_checked = 0;
  bool f0_ok = false;
  double f0 = 0.0;
  bool fprime0_ok = false;
  double fprime0 = 0.0;
  /// Windowed sup |F''| by central differences; not a global bound.
  double second_derivative_bound = 0.0;
  bool monotone_ok = false;
  /// Decay exponent sigma with F(k) <= K |k|^-sigma.
  double sigma = 0.0;
  /// K for the sampled symbol k -> F(sqrt(mu) k).
  double k_sampled = 0.0;
  /// K for F itself: k_sampled * mu^(sigma/2).
  double k_F = 0.0;
  /// True when sigma came from a log-log fit rather than the {0, 1/2, 1} test.
  bool sigma_approximate = false;

  bool admissible() const { return subadditive_ok && f0_ok && fprime0_ok; }
};

/// Samples k -> F_i(sqrt(mu) k) on [-k_max, k_max] with `samples` points per
/// axis (samples^2 pairs for sub-additivity). Violations are reported.
AdmissibilityReport check_admissibility(const MultiplierSpec& spec, Layer layer, double mu,
                                        double delta, double k_max, std::size_t samples);

std::string format_report(const AdmissibilityReport& report, const MultiplierSpec& spec,
                          Layer layer);

}  // namespace mgn
