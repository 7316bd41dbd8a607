#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mgn/multipliers.hpp"
#include "mgn/params.hpp"

namespace mgn {

/// Symbol of the linearized system about constant shear:
///   d_t zeta + c d_x zeta + b d_x v = 0,  d_t v + a d_x zeta + c d_x v = 0.
struct LinearCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Full Euler coefficients about the shear vbar = u2 - gamma u1. The k -> 0
/// limit is removable and evaluated without division by zero.
LinearCoeffs euler_coeffs(double k, const PhysParams& params, double vbar);

/// Model coefficients a^F, b^F, c^F about the constant flux wbar.
LinearCoeffs model_coeffs(double k, const PhysParams& params, const MultiplierSpec& spec,
                          double wbar);

/// Coefficient Gamma(k) of eps^2 wbar^2 in a^F, so that
/// a^F = (gamma+delta)(1 + k^2/Bo) - eps^2 wbar^2 Gamma(k).
double model_shear_coefficient(double k, const PhysParams& params, const MultiplierSpec& spec);
/// Same for the full Euler a(k), expressed in eps^2 wbar^2 with wbar = vbar/(gamma+delta).
double euler_shear_coefficient(double k, const PhysParams& params);

struct StabilityCurve {
  std::string model;
  std::vector<double> k;
  /// eps^2 |wbar|^2 at which a(k) changes sign; NaN where the mode is
  /// unconditionally stable.
  std::vector<double> threshold;
};

StabilityCurve threshold_curve(const std::vector<double>& k_grid, const PhysParams& params,
                               const MultiplierSpec& spec);
StabilityCurve euler_threshold_curve(const std::vector<double>& k_grid, const PhysParams& params);

/// Imaginary part of the unstable eigenfrequency omega = k * eig([[c, b], [a, c]]);
/// zero for a stable mode.
double growth_rate(double k, const PhysParams& params, const MultiplierSpec& spec, double wbar);

/// Eigenvalues of the 2x2 symbol matrix [[c, b], [a, c]] as (re, im) of the
/// root with nonnegative imaginary part.
std::pair<double, double> symbol_eigenvalue(const LinearCoeffs& coeffs);

/// Uniformly spaced k in [k_min, k_max] (inclusive) with `count` points.
std::vector<double> linspace(double k_min, double k_max, std::size_t count);

/// Writes the CSV `k,threshold_original,threshold_regularized,threshold_improved,threshold_euler`.
void write_threshold_csv(std::ostream& out, const std::vector<double>& k_grid,
                         const PhysParams& params, const MultiplierSpec& regularized);

}  // namespace mgn
