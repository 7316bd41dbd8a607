#include "mgn/simulation.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "mgn/errors.hpp"
#include "mgn/io_store.hpp"
#include "mgn/saint_venant.hpp"
#include "mgn/stability.hpp"

namespace mgn {

namespace {

PhysParams sv_params(PhysParams p) {
  p.mu = 0.0;
  return p;
}

Field slice(const Grid& grid, std::span<const double> y, std::size_t offset) {
  return Field(grid, std::vector<double>(y.begin() + offset, y.begin() + offset + grid.size()));
}

std::vector<double> pack(const GNState& s) {
  std::vector<double> y(s.zeta.values().begin(), s.zeta.values().end());
  y.insert(y.end(), s.v.values().begin(), s.v.values().end());
  return y;
}

bool recoverable(const std::exception& e) {
  return dynamic_cast<const StateError*>(&e) || dynamic_cast<const CorruptionError*>(&e) ||
         dynamic_cast<const SolverError*>(&e);
}

}  // namespace

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BlowUp: return "blowup";
    case RunStatus::Cancelled: return "cancelled";
  }
  return "?";
}

GNState make_initial_state(const ExperimentConfig& c, const Grid& grid) {
  const double A = c.ic_amplitude;
  switch (c.initial) {
    case InitialKind::Rest:
      return {Field(grid), Field(grid)};
    case InitialKind::Gaussian: {
      const double width = c.ic_width;
      return {Field::from_function(grid, [&](double x) { return A * std::exp(-width * x * x); }),
              Field(grid)};
    }
    case InitialKind::Mode: {
      const double k = grid.wavenumber(c.ic_mode);
      return {Field::from_function(grid, [&](double x) { return A * std::cos(k * x); }),
              Field(grid)};
    }
    case InitialKind::ShearMode: {
      // Constant flux wbar at zeta = 0 is steady, with v = (gamma+delta) wbar.
      // The perturbation follows the eigenvector of the linearized symbol.
      const double k = grid.wavenumber(c.ic_mode);
      const bool sv = c.model == ModelKind::SaintVenant;
      const PhysParams p = sv ? sv_params(c.params) : c.params;
      const MultiplierSpec spec = sv ? MultiplierSpec::identity() : c.multiplier_spec();
      const LinearCoeffs lc = model_coeffs(k, p, spec, c.ic_shear);
      const double v0 = p.gamma_plus_delta() * c.ic_shear;
      Field zeta = Field::from_function(grid, [&](double x) { return A * std::cos(k * x); });
      Field v(grid);
      if (lc.a < 0.0) {
        const double s = std::sqrt(-lc.a * lc.b) / lc.b;
        v = Field::from_function(grid, [&](double x) { return v0 - s * A * std::sin(k * x); });
      } else {
        const double s = std::sqrt(lc.a / lc.b);
        v = Field::from_function(grid, [&](double x) { return v0 + s * A * std::cos(k * x); });
      }
      return {std::move(zeta), std::move(v)};
    }
  }
  throw ValidationError("initial", "unknown initial condition");
}

RunResult run_simulation(const ExperimentConfig& c, const RunObserver& obs) {
  c.validate();
  const auto start = std::chrono::steady_clock::now();
  const Grid grid(c.n, c.half_length);
  const bool sv = c.model == ModelKind::SaintVenant;
  const CgOptions cg{c.cg_tol, c.cg_max_iter};
  // The Saint-Venant diagnostics reuse the GN functionals at mu = 0, where v = vbar.
  GNModel model = sv ? GNModel(grid, sv_params(c.params), MultiplierSpec::identity(), cg)
                     : GNModel(grid, c.params, c.multiplier_spec(), cg);
  model.set_dealias(c.dealias);
  const PhysParams params = model.params();
  const double k_band = c.k_band > 0.0 ? c.k_band : default_k_band(grid);
  const std::size_t n = grid.size();

  GNWorkspace ws;
  auto flux = [&](const Field& zeta, const Field& v) {
    if (sv) return sv_flux(zeta, v, params);
    const Field* guess = ws.last_w ? &*ws.last_w : nullptr;
    return model.invert_AF(zeta, v, guess);
  };

  GNState init = make_initial_state(c, grid);
  Field w0 = flux(init.zeta, init.v);
  RunResult result(std::move(init), std::move(w0));

  auto make_row = [&](double t, const Field& zeta, const Field& v, const Field& w) {
    DiagnosticsRow row = compute_row(model, t, zeta, v, w, k_band);
    if (sv) row.hyp_margin = sv_hyperbolicity_margin({zeta, v}, params);
    return row;
  };
  auto emit_row = [&](const DiagnosticsRow& row) {
    result.band_peak = std::max(result.band_peak, row.high_band);
    if (obs.on_diagnostics) obs.on_diagnostics(row);
  };

  result.initial = make_row(0.0, result.state.zeta, result.state.v, result.w);
  result.final = result.initial;
  emit_row(result.initial);
  if (obs.on_snapshot) obs.on_snapshot(0.0, result.state.zeta, result.w);

  RhsFn rhs = [&](double, std::span<const double> y, std::span<double> dydt) {
    GNState s{slice(grid, y, 0), slice(grid, y, n)};
    auto [dz, dv] = sv ? sv_rhs({s.zeta, s.v}, params) : model.rhs(s, ws);
    std::copy(dz.values().begin(), dz.values().end(), dydt.begin());
    std::copy(dv.values().begin(), dv.values().end(), dydt.begin() + n);
  };

  std::size_t last_row_step = 0;
  StepCallback on_step = [&](double t, std::span<const double> y, const StepStats& stats,
                             bool at_stop) {
    if (at_stop || stats.accepted - last_row_step >= c.diag_stride) {
      const Field zeta = slice(grid, y, 0);
      const Field v = slice(grid, y, n);
      const Field w = flux(zeta, v);
      result.final = make_row(t, zeta, v, w);
      emit_row(result.final);
      last_row_step = stats.accepted;
      if (at_stop && obs.on_snapshot) obs.on_snapshot(t, zeta, w);
    }
    return !obs.keep_going || obs.keep_going(t);
  };

  StepController ctl;
  ctl.rel_tol = c.rel_tol;
  ctl.abs_tol = c.abs_tol;
  ctl.min_dt = c.min_dt;

  std::vector<double> stops = c.snapshot_times;
  const IntegrationResult ir =
      integrate(pack(result.state), rhs, 0.0, c.t_end, ctl, stops, on_step, recoverable);

  result.t = ir.t;
  result.stats = ir.stats;
  result.cg_iterations = ws.cg_iterations;
  if (ir.status != IntegrationStatus::Completed) result.message = ir.message;
  result.state = {slice(grid, ir.y, 0), slice(grid, ir.y, n)};
  result.w = flux(result.state.zeta, result.state.v);
  switch (ir.status) {
    case IntegrationStatus::Completed: result.status = RunStatus::Completed; break;
    case IntegrationStatus::Cancelled: result.status = RunStatus::Cancelled; break;
    case IntegrationStatus::StepUnderflow: result.status = RunStatus::BlowUp; break;
  }
  if (result.status != RunStatus::Completed && result.final.t != result.t) {
    result.final = make_row(result.t, result.state.zeta, result.state.v, result.w);
    emit_row(result.final);
    if (obs.on_snapshot) obs.on_snapshot(result.t, result.state.zeta, result.w);
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RunResult run_to_directory(const ExperimentConfig& c, const std::filesystem::path& dir,
                           bool force, const std::string& command) {
  c.validate();
  prepare_run_directory(dir, force);
  write_text_file(dir / kConfigName, serialize_config(c));
  DiagWriter diag(dir / kDiagName);

  RunObserver obs;
  obs.on_diagnostics = [&](const DiagnosticsRow& row) { diag.write(row); };
  obs.on_snapshot = [&](double t, const Field& zeta, const Field& w) {
    write_snapshot(dir, t, zeta, w);
    if (c.spectra) write_spectrum(dir, t, zeta);
  };
  RunResult r = run_simulation(c, obs);

  ManifestInfo info;
  info.command = command;
  info.status = to_string(r.status);
  info.wall_seconds = r.wall_seconds;
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  info.entries = {
      {"model", to_string(c.model)},
      {"multiplier", c.multiplier},
      {"t_final", num(r.t)},
      {"steps_accepted", std::to_string(r.stats.accepted)},
      {"steps_rejected", std::to_string(r.stats.rejected)},
      {"rhs_evaluations", std::to_string(r.stats.rhs_evaluations)},
      {"failed_stages", std::to_string(r.stats.failed_stages)},
      {"cg_iterations", std::to_string(r.cg_iterations)},
  };
  if (!r.message.empty()) info.entries.emplace_back("message", r.message);
  write_manifest(dir, info);
  return r;
}

}  // namespace mgn
