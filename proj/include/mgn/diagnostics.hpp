#pragma once

#include <ostream>
#include <string>

#include "mgn/gn_operators.hpp"
#include "mgn/spectral.hpp"

namespace mgn {

/// One row of monitored quantities along a trajectory.
struct DiagnosticsRow {
  double t = 0.0;
  double Z = 0.0;  ///< mass
  double V = 0.0;  ///< horizontal velocity mass
  double I = 0.0;  ///< impulse
  double H = 0.0;  ///< energy
  double M = 0.0;  ///< momentum (not conserved)
  double C = 0.0;  ///< centroid quantity (conserved only for gamma = 0)
  double hyp_margin = 0.0;
  double high_band = 0.0;
};

double mass(const Field& zeta);
/// Integral of A^F[eps zeta] w, i.e. of v.
double velocity_mass(const GNModel& model, const Field& zeta, const Field& w);
double impulse(const Field& zeta, const Field& v);

/// Integral of (gamma+delta) zeta^2 + capillary term + gamma h1 u1^2 + h2 u2^2
/// + mu (gamma/3) h1 (h1 d_x F1 u1)^2 + (mu/3) h2 (h2 d_x F2 u2)^2. Vanishes at rest.
double energy(const GNModel& model, const Field& zeta, const Field& w);

/// Hamiltonian functional H(zeta, v) = energy / 2, evaluated through the
/// stationary form <v, w> - <w, A w>/2 so that solver error enters only at
/// second order.
double hamiltonian(const GNModel& model, const Field& zeta, const Field& v);

/// Integral of gamma h1 u1 + h2 u2 = (1 - gamma) w.
double momentum(const Field& w, double gamma);
/// Integral of zeta x - t w.
double centroid(const Field& zeta, const Field& w, double t);

/// max over |k| >= k_band of |zeta_hat(k)|, with a unit sine having |zeta_hat| = 1/2.
double band_max(const Field& zeta, double k_band);

/// Default band edge: half the Nyquist wavenumber.
double default_k_band(const Grid& grid);

DiagnosticsRow compute_row(const GNModel& model, double t, const Field& zeta, const Field& v,
                           const Field& w, double k_band);

inline constexpr const char* kDiagnosticsHeader = "t,Z,V,I,H,M,C,hyp_margin,high_band";
std::string format_row(const DiagnosticsRow& row);

}  // namespace mgn
