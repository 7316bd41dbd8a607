#pragma once

#include <utility>

#include "mgn/params.hpp"
#include "mgn/spectral.hpp"

namespace mgn {

/// Interface deformation and vbar = u2 - gamma u1.
struct SVState {
  Field zeta;
  Field vbar;
};

/// H(X) = h1 h2 / (h1 + gamma h2) with h1 = 1 - X, h2 = 1/delta + X.
double sv_H(double X, const PhysParams& params);
/// dH/dX = (h1^2 - gamma h2^2) / (h1 + gamma h2)^2.
double sv_H_prime(double X, const PhysParams& params);
/// d^2H/dX^2 = -2 gamma (h1 + h2)^2 / (h1 + gamma h2)^3.
double sv_H_second(double X, const PhysParams& params);

/// The mu = 0 system with surface tension:
///   d_t zeta = -d_x(H(eps zeta) vbar),
///   d_t vbar = -(gamma+delta) d_x zeta - (eps/2) d_x(H'(eps zeta) vbar^2)
///              + (gamma+delta) Bo^-1 d_x^3 zeta.
std::pair<Field, Field> sv_rhs(const SVState& state, const PhysParams& params);

/// w = H(eps zeta) vbar.
Field sv_flux(const Field& zeta, const Field& vbar, const PhysParams& params);

/// min_x (gamma+delta) + (eps^2/2) H''(eps zeta) vbar^2.
double sv_hyperbolicity_margin(const SVState& state, const PhysParams& params);

}  // namespace mgn
