#include "mgn/gn_operators.hpp"

#include <cmath>
#include <string>

#include "mgn/errors.hpp"

namespace mgn {

namespace {

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
  return s;
}

Field cube(const Field& f) { return f * f * f; }

}  // namespace

GNModel::GNModel(Grid grid, PhysParams params, MultiplierSpec spec, CgOptions cg)
    : grid_(std::move(grid)),
      params_(params),
      spec_(std::move(spec)),
      cg_(cg),
      f1_(layer_symbol(grid_, spec_, Layer::Upper, params_.mu, params_.delta)),
      f2_(layer_symbol(grid_, spec_, Layer::Lower, params_.mu, params_.delta)),
      flat_(Symbol::ones(grid_)),
      inv_flat_(Symbol::ones(grid_)),
      filter_(two_thirds_filter(grid_)) {
  params_.validate();
  spec_.validate();
  if (!(cg_.tol > 0.0) || cg_.max_iter == 0) {
    throw ValidationError("cg_tol", "CG tolerance and iteration cap must be positive");
  }
  const double g = params_.gamma;
  const double d = params_.delta;
  std::vector<double> flat(grid_.num_modes());
  for (std::size_t m = 0; m < flat.size(); ++m) {
    const double k = grid_.wavenumber(m);
    if (m == grid_.nyquist()) {
      flat[m] = g + d;
    } else {
      flat[m] = (g + d) +
                params_.mu * (f2_[m] * f2_[m] + g * d * f1_[m] * f1_[m]) * k * k / (3.0 * d);
    }
  }
  std::vector<double> inv(flat.size());
  for (std::size_t m = 0; m < flat.size(); ++m) inv[m] = 1.0 / flat[m];
  flat_ = Symbol(std::move(flat));
  inv_flat_ = Symbol(std::move(inv));
}

Field GNModel::h1(const Field& zeta) const {
  Field h = -params_.epsilon * zeta;
  for (double& v : h.values()) v += 1.0;
  return h;
}

Field GNModel::h2(const Field& zeta) const {
  Field h = params_.epsilon * zeta;
  for (double& v : h.values()) v += 1.0 / params_.delta;
  return h;
}

void GNModel::check_depths(const Field& zeta) const {
  zeta.check_finite("zeta");
  const double e = params_.epsilon;
  const double min_h1 = 1.0 - e * zeta.max();
  const double min_h2 = 1.0 / params_.delta + e * zeta.min();
  if (min_h1 <= kMinDepth || min_h2 <= kMinDepth) {
    throw StateError("cavitation: min h1 = " + std::to_string(min_h1) +
                     ", min h2 = " + std::to_string(min_h2));
  }
}

GNModel::LayerTerms GNModel::layer_terms(Layer layer, const Field& h, const Field& u) const {
  const Symbol& f = symbol(layer);
  Field du = ddx_symbol(u, f);
  Field t = ddx_symbol(cube(h) * du, f);
  return {std::move(du), std::move(t)};
}

Field GNModel::q_i(Layer layer, const Field& h, const Field& u) const {
  if (h.min() <= kMinDepth) throw StateError("cavitation in q_i");
  auto terms = layer_terms(layer, h, u);
  return (-1.0 / 3.0) * (terms.t / h);
}

Field GNModel::r_i(Layer layer, const Field& h, const Field& u) const {
  if (h.min() <= kMinDepth) throw StateError("cavitation in r_i");
  auto terms = layer_terms(layer, h, u);
  Field hdu = h * terms.du;
  return 0.5 * (hdu * hdu) + (1.0 / 3.0) * (u * terms.t / h);
}

Field GNModel::apply_AF(const Field& zeta, const Field& w) const {
  check_depths(zeta);
  const Field a = h1(zeta);
  const Field b = h2(zeta);
  const double g = params_.gamma;
  Field out(grid_);
  {
    auto o = out.values();
    auto x = w.values();
    auto p = a.values();
    auto q = b.values();
    for (std::size_t j = 0; j < o.size(); ++j) {
      o[j] = (p[j] + g * q[j]) / (p[j] * q[j]) * x[j];
    }
  }
  if (params_.mu > 0.0) {
    const double mu3 = params_.mu / 3.0;
    const auto upper = layer_terms(Layer::Upper, a, w / a);
    const auto lower = layer_terms(Layer::Lower, b, w / b);
    out -= (g * mu3) * (upper.t / a);
    out -= mu3 * (lower.t / b);
  }
  return out;
}

Field GNModel::precondition(const Field& r) const { return apply_symbol(r, inv_flat_); }

Field GNModel::invert_AF(const Field& zeta, const Field& v, const Field* initial_guess,
                         CgStats* stats) const {
  check_depths(zeta);
  v.check_finite("v");
  CgStats local;
  CgStats& st = stats ? *stats : local;
  st = CgStats{};

  if (params_.mu == 0.0) {
    // A is pointwise multiplication by (h1 + gamma h2)/(h1 h2).
    const Field a = h1(zeta);
    const Field b = h2(zeta);
    Field w = v * a * b;
    auto wv = w.values();
    auto p = a.values();
    auto q = b.values();
    for (std::size_t j = 0; j < wv.size(); ++j) wv[j] /= p[j] + params_.gamma * q[j];
    return w;
  }

  const double v_norm = std::sqrt(dot(v, v));
  if (v_norm == 0.0) {
    return Field(grid_);
  }
  const double target = cg_.tol * v_norm;

  Field w = initial_guess ? *initial_guess : precondition(v);
  Field r = v - apply_AF(zeta, w);
  std::vector<double> history;
  history.reserve(cg_.max_iter + 1);

  // Restarted once from the true residual if recursion drift hides a miss.
  for (int pass = 0; pass < 2; ++pass) {
    double r_norm = std::sqrt(dot(r, r));
    history.push_back(r_norm / v_norm);
    if (r_norm <= target) {
      st.relative_residual = r_norm / v_norm;
      return w;
    }
    Field z = precondition(r);
    Field p = z;
    double rz = dot(r, z);
    while (st.iterations < cg_.max_iter) {
      const Field ap = apply_AF(zeta, p);
      const double pap = dot(p, ap);
      if (!(pap > 0.0)) {
        throw SolverError("invert_AF: operator lost positive definiteness", history);
      }
      const double alpha = rz / pap;
      {
        auto wv = w.values();
        auto rv = r.values();
        auto pv = p.values();
        auto av = ap.values();
        for (std::size_t j = 0; j < wv.size(); ++j) {
          wv[j] += alpha * pv[j];
          rv[j] -= alpha * av[j];
        }
      }
      ++st.iterations;
      r_norm = std::sqrt(dot(r, r));
      history.push_back(r_norm / v_norm);
      if (r_norm <= target) break;
      z = precondition(r);
      const double rz_next = dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      auto pv = p.values();
      auto zv = z.values();
      for (std::size_t j = 0; j < pv.size(); ++j) pv[j] = zv[j] + beta * pv[j];
    }
    r = v - apply_AF(zeta, w);
    r_norm = std::sqrt(dot(r, r));
    st.relative_residual = r_norm / v_norm;
    if (r_norm <= target) {
      return w;
    }
    if (st.iterations >= cg_.max_iter) break;
  }
  throw SolverError("invert_AF: no convergence after " + std::to_string(st.iterations) +
                        " iterations (relative residual " +
                        std::to_string(st.relative_residual) + ")",
                    history);
}

Field GNModel::surface_tension_term(const Field& zeta) const {
  zeta.check_finite("zeta");
  if (params_.inv_bond == 0.0) return Field(grid_);
  const Field zx = ddx(zeta);
  const double s = params_.mu * params_.epsilon * params_.epsilon;
  Field flux = zx;
  for (double& v : flux.values()) v /= std::sqrt(1.0 + s * v * v);
  return params_.gamma_plus_delta() * params_.inv_bond * ddx(ddx(flux));
}

Field GNModel::r_total(const Field& zeta, const Field& w) const {
  const Field a = h1(zeta);
  const Field b = h2(zeta);
  return r_i(Layer::Lower, b, w / b) - params_.gamma * r_i(Layer::Upper, a, -(w / a));
}

Field GNModel::dH_dzeta(const Field& zeta, const Field& w) const {
  check_depths(zeta);
  const double gd = params_.gamma_plus_delta();
  const double e = params_.epsilon;
  const double g = params_.gamma;
  Field out = gd * zeta;
  if (params_.inv_bond > 0.0) {
    const double s = params_.mu * e * e;
    Field flux = ddx(zeta);
    for (double& v : flux.values()) v /= std::sqrt(1.0 + s * v * v);
    out -= (gd * params_.inv_bond) * ddx(flux);
  }
  if (e > 0.0) {
    const Field a = h1(zeta);
    const Field b = h2(zeta);
    auto o = out.values();
    auto x = w.values();
    auto p = a.values();
    auto q = b.values();
    for (std::size_t j = 0; j < o.size(); ++j) {
      const double p2 = p[j] * p[j];
      const double q2 = q[j] * q[j];
      o[j] += 0.5 * e * (p2 - g * q2) / (p2 * q2) * x[j] * x[j];
    }
    if (params_.mu > 0.0) {
      out -= (params_.mu * e) * r_total(zeta, w);
    }
  }
  return out;
}

std::pair<Field, Field> GNModel::rhs(const GNState& state, GNWorkspace& ws) const {
  check_depths(state.zeta);
  state.v.check_finite("v");
  const Field* guess =
      ws.last_w && ws.last_w->size() == grid_.size() ? &*ws.last_w : nullptr;
  Field w = invert_AF(state.zeta, state.v, guess, &ws.last_solve);
  ++ws.solves;
  ws.cg_iterations += ws.last_solve.iterations;

  Field dzeta = -ddx(w);
  Field dv = -ddx(dH_dzeta(state.zeta, w));
  if (dealias_) {
    dzeta = apply_symbol(dzeta, filter_);
    dv = apply_symbol(dv, filter_);
  }
  ws.last_w = std::move(w);
  return {std::move(dzeta), std::move(dv)};
}

std::pair<Field, Field> GNModel::w_to_velocities(const Field& zeta, const Field& w) const {
  check_depths(zeta);
  return {-(w / h1(zeta)), w / h2(zeta)};
}

double GNModel::hyperbolicity_margin(const Field& zeta, const Field& w) const {
  const double gd = params_.gamma_plus_delta();
  const double e2 = params_.epsilon * params_.epsilon;
  const Field a = h1(zeta);
  const Field b = h2(zeta);
  double margin = gd;
  bool first = true;
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    const double m = gd - e2 * (1.0 / (b[j] * b[j] * b[j]) +
                                params_.gamma / (a[j] * a[j] * a[j])) * w[j] * w[j];
    if (first || m < margin) margin = m;
    first = false;
  }
  return margin;
}

}  // namespace mgn
