#include "mgn/diagnostics.hpp"

#include <cmath>
#include <cstdio>

namespace mgn {

double mass(const Field& zeta) { return integrate(zeta); }

double velocity_mass(const GNModel& model, const Field& zeta, const Field& w) {
  return integrate(model.apply_AF(zeta, w));
}

double impulse(const Field& zeta, const Field& v) { return inner(zeta, v); }

namespace {

// 2 (gamma+delta)/(mu eps^2 Bo) (sqrt(1 + mu eps^2 zx^2) - 1), rewritten as
// 2 (gamma+delta) Bo^-1 zx^2 / (sqrt(1 + s) + 1) with s = mu eps^2 zx^2, which
// has no removable singularity at mu eps^2 = 0.
double capillary_density(double zx, double s_coeff, double gd_inv_bond) {
  const double z2 = zx * zx;
  return 2.0 * gd_inv_bond * z2 / (std::sqrt(1.0 + s_coeff * z2) + 1.0);
}

double potential_energy(const GNModel& model, const Field& zeta) {
  const auto& p = model.params();
  const double gd = p.gamma_plus_delta();
  long double sum = 0.0L;
  for (double z : zeta.values()) sum += gd * z * z;
  if (p.inv_bond > 0.0) {
    const Field zx = ddx(zeta);
    const double s = p.mu * p.epsilon * p.epsilon;
    for (double v : zx.values()) sum += capillary_density(v, s, gd * p.inv_bond);
  }
  return static_cast<double>(sum) * zeta.grid().dx();
}

}  // namespace

double energy(const GNModel& model, const Field& zeta, const Field& w) {
  const auto& p = model.params();
  double total = potential_energy(model, zeta);
  const auto [u1, u2] = model.w_to_velocities(zeta, w);
  const Field a = model.h1(zeta);
  const Field b = model.h2(zeta);
  double kinetic = 0.0;
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    kinetic += p.gamma * a[j] * u1[j] * u1[j] + b[j] * u2[j] * u2[j];
  }
  if (p.mu > 0.0) {
    const Field d1 = a * ddx_symbol(u1, model.symbol(Layer::Upper));
    const Field d2 = b * ddx_symbol(u2, model.symbol(Layer::Lower));
    for (std::size_t j = 0; j < zeta.size(); ++j) {
      kinetic += p.mu / 3.0 * (p.gamma * a[j] * d1[j] * d1[j] + b[j] * d2[j] * d2[j]);
    }
  }
  return total + kinetic * zeta.grid().dx();
}

double hamiltonian(const GNModel& model, const Field& zeta, const Field& v) {
  const Field w = model.invert_AF(zeta, v);
  // <v, w> - <w, A w>/2 written as <v + r, w>/2 with r = v - A w.
  const Field vr = 2.0 * v - model.apply_AF(zeta, w);
  return 0.5 * (potential_energy(model, zeta) + inner(vr, w));
}

double momentum(const Field& w, double gamma) { return (1.0 - gamma) * integrate(w); }

double centroid(const Field& zeta, const Field& w, double t) {
  const Grid& grid = zeta.grid();
  double sum = 0.0;
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    sum += zeta[j] * grid.node(j) - t * w[j];
  }
  return sum * grid.dx();
}

double band_max(const Field& zeta, double k_band) {
  const Grid& grid = zeta.grid();
  const auto coeffs = normalized_spectrum(zeta);
  double out = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    if (grid.wavenumber(m) >= k_band) out = std::max(out, std::abs(coeffs[m]));
  }
  return out;
}

double default_k_band(const Grid& grid) { return 0.5 * grid.wavenumber(grid.nyquist()); }

DiagnosticsRow compute_row(const GNModel& model, double t, const Field& zeta, const Field& v,
                           const Field& w, double k_band) {
  DiagnosticsRow row;
  row.t = t;
  row.Z = mass(zeta);
  row.V = integrate(v);
  row.I = impulse(zeta, v);
  row.H = energy(model, zeta, w);
  row.M = momentum(w, model.params().gamma);
  row.C = centroid(zeta, w, t);
  row.hyp_margin = model.hyperbolicity_margin(zeta, w);
  row.high_band = band_max(zeta, k_band);
  return row;
}

std::string format_row(const DiagnosticsRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t,
                r.Z, r.V, r.I, r.H, r.M, r.C, r.hyp_margin, r.high_band);
  return buf;
}

}  // namespace mgn
