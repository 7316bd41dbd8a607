#include "mgn/saint_venant.hpp"

#include <algorithm>
#include <limits>

#include "mgn/errors.hpp"
#include "mgn/gn_operators.hpp"

namespace mgn {

namespace {

struct Depths {
  double h1;
  double h2;
};

Depths depths(double X, const PhysParams& p) { return {1.0 - X, 1.0 / p.delta + X}; }

void check_depths(const Field& zeta, const PhysParams& p) {
  for (double z : zeta.values()) {
    const auto [h1, h2] = depths(p.epsilon * z, p);
    if (!(h1 > kMinDepth && h2 > kMinDepth)) {
      throw StateError("cavitation: layer depth below " + std::to_string(kMinDepth));
    }
  }
}

}  // namespace

double sv_H(double X, const PhysParams& p) {
  const auto [h1, h2] = depths(X, p);
  return h1 * h2 / (h1 + p.gamma * h2);
}

double sv_H_prime(double X, const PhysParams& p) {
  const auto [h1, h2] = depths(X, p);
  const double d = h1 + p.gamma * h2;
  return (h1 * h1 - p.gamma * h2 * h2) / (d * d);
}

double sv_H_second(double X, const PhysParams& p) {
  const auto [h1, h2] = depths(X, p);
  const double d = h1 + p.gamma * h2;
  return -2.0 * p.gamma * (h1 + h2) * (h1 + h2) / (d * d * d);
}

Field sv_flux(const Field& zeta, const Field& vbar, const PhysParams& p) {
  Field w(zeta.grid());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = sv_H(p.epsilon * zeta[j], p) * vbar[j];
  return w;
}

std::pair<Field, Field> sv_rhs(const SVState& s, const PhysParams& p) {
  s.zeta.check_finite("zeta");
  s.vbar.check_finite("vbar");
  check_depths(s.zeta, p);
  const double gd = p.gamma_plus_delta();

  Field flux = sv_flux(s.zeta, s.vbar, p);
  Field dzeta = -ddx(flux);

  // Everything under the outer derivative, as in the GN form.
  const Field zx = ddx(s.zeta);
  Field g = gd * s.zeta - (gd * p.inv_bond) * ddx(zx);
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] += 0.5 * p.epsilon * sv_H_prime(p.epsilon * s.zeta[j], p) * s.vbar[j] * s.vbar[j];
  }
  Field dv = -ddx(g);
  return {std::move(dzeta), std::move(dv)};
}

double sv_hyperbolicity_margin(const SVState& s, const PhysParams& p) {
  double margin = std::numeric_limits<double>::infinity();
  const double e2 = p.epsilon * p.epsilon;
  for (std::size_t j = 0; j < s.zeta.size(); ++j) {
    const double m = p.gamma_plus_delta() +
                     0.5 * e2 * sv_H_second(p.epsilon * s.zeta[j], p) * s.vbar[j] * s.vbar[j];
    margin = std::min(margin, m);
  }
  return margin;
}

}  // namespace mgn
