#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mgn/multipliers.hpp"
#include "mgn/params.hpp"
#include "mgn/spectral.hpp"

namespace mgn {

/// Interface deformation zeta and momentum variable v = A^F[eps zeta] w.
struct GNState {
  Field zeta;
  Field v;
};

struct CgOptions {
  double tol = 1e-12;
  std::size_t max_iter = 200;
};

struct CgStats {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Per-integration scratch state. Holds the last solved w for warm starts;
/// must not be shared between concurrent rhs evaluations.
struct GNWorkspace {
  std::optional<Field> last_w;
  CgStats last_solve;
  std::size_t solves = 0;
  std::size_t cg_iterations = 0;
};

/// Minimum admissible layer depth; anything thinner is treated as cavitation.
inline constexpr double kMinDepth = 1e-6;

/// The modified two-layer Green-Naghdi system on a periodic grid, with the
/// multiplier symbols F_i(sqrt(mu) k) sampled once at construction.
class GNModel {
 public:
  GNModel(Grid grid, PhysParams params, MultiplierSpec spec, CgOptions cg = {});

  const Grid& grid() const { return grid_; }
  const PhysParams& params() const { return params_; }
  const MultiplierSpec& spec() const { return spec_; }
  const CgOptions& cg_options() const { return cg_; }
  const Symbol& symbol(Layer layer) const {
    return layer == Layer::Upper ? f1_ : f2_;
  }
  /// Flat-interface symbol of A^F: (gamma+delta) + mu (F2^2 + gamma delta F1^2) k^2 / (3 delta).
  /// At the Nyquist mode, where d/dx vanishes, this is gamma + delta.
  const Symbol& flat_symbol() const { return flat_; }

  /// Enables the 2/3-rule filter on rhs outputs.
  void set_dealias(bool on) { dealias_ = on; }
  bool dealias() const { return dealias_; }

  Field h1(const Field& zeta) const;
  Field h2(const Field& zeta) const;
  /// Throws StateError when min h_i <= kMinDepth.
  void check_depths(const Field& zeta) const;

  /// -(1/3) h^-1 d_x F{h^3 d_x F u}.
  Field q_i(Layer layer, const Field& h, const Field& u) const;
  /// (1/2)(h d_x F u)^2 + (1/3) h^-1 u d_x F{h^3 d_x F u}.
  Field r_i(Layer layer, const Field& h, const Field& u) const;

  /// ((h1 + gamma h2)/(h1 h2)) w + mu Q^F[eps zeta] w.
  Field apply_AF(const Field& zeta, const Field& w) const;

  /// Solves A^F[eps zeta] w = v by conjugate gradients preconditioned with
  /// 1/flat_symbol. Throws SolverError if max_iter is exhausted.
  Field invert_AF(const Field& zeta, const Field& v, const Field* initial_guess = nullptr,
                  CgStats* stats = nullptr) const;

  /// (gamma+delta) Bo^-1 d_x^2 ( d_x zeta / sqrt(1 + mu eps^2 (d_x zeta)^2) ).
  Field surface_tension_term(const Field& zeta) const;

  /// Variational derivative of the Hamiltonian with respect to zeta, at fixed v:
  /// (gamma+delta) zeta - (gamma+delta)/Bo d_x(...) + (eps/2)(h1^2 - gamma h2^2)/(h1 h2)^2 w^2
  /// - mu eps R^F[eps zeta, w].
  Field dH_dzeta(const Field& zeta, const Field& w) const;

  /// R^F[eps zeta, w] = R_2[h2, w/h2] - gamma R_1[h1, -w/h1].
  Field r_total(const Field& zeta, const Field& w) const;

  /// (d zeta/dt, dv/dt) = (-d_x w, -d_x dH_dzeta).
  std::pair<Field, Field> rhs(const GNState& state, GNWorkspace& workspace) const;

  /// (u1, u2) = (-w/h1, w/h2).
  std::pair<Field, Field> w_to_velocities(const Field& zeta, const Field& w) const;

  /// min_x (gamma+delta) - eps^2 (h2^-3 + gamma h1^-3) w^2.
  double hyperbolicity_margin(const Field& zeta, const Field& w) const;

 private:
  struct LayerTerms {
    Field du;  // d_x F u
    Field t;   // d_x F {h^3 d_x F u}
  };
  LayerTerms layer_terms(Layer layer, const Field& h, const Field& u) const;
  Field precondition(const Field& r) const;

  Grid grid_;
  PhysParams params_;
  MultiplierSpec spec_;
  CgOptions cg_;
  Symbol f1_;
  Symbol f2_;
  Symbol flat_;
  Symbol inv_flat_;
  Symbol filter_;
  bool dealias_ = false;
};

}  // namespace mgn
