#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "mgn/config.hpp"
#include "mgn/diagnostics.hpp"
#include "mgn/gn_operators.hpp"
#include "mgn/timestepper.hpp"

namespace mgn {

/// Initial (zeta, v) for the configured experiment. For the Saint-Venant
/// model the second field is vbar, which coincides with v at mu = 0.
GNState make_initial_state(const ExperimentConfig& config, const Grid& grid);

enum class RunStatus { Completed, BlowUp, Cancelled };
const char* to_string(RunStatus status);

struct RunObserver {
  std::function<void(const DiagnosticsRow&)> on_diagnostics;
  /// Called at t = 0, at every snapshot time, and at the last healthy state
  /// of a run that blows up.
  std::function<void(double t, const Field& zeta, const Field& w)> on_snapshot;
  /// Polled after each accepted step; returning false cancels the run.
  std::function<bool(double t)> keep_going;
};

struct RunResult {
  RunResult(GNState s, Field w0) : state(std::move(s)), w(std::move(w0)) {}

  RunStatus status = RunStatus::Completed;
  double t = 0.0;
  /// Final state, or the last accepted state when the run blew up.
  GNState state;
  Field w;
  DiagnosticsRow initial;
  DiagnosticsRow final;
  /// Largest high_band value seen over all recorded rows.
  double band_peak = 0.0;
  StepStats stats;
  std::size_t cg_iterations = 0;
  double wall_seconds = 0.0;
  std::string message;
};

RunResult run_simulation(const ExperimentConfig& config, const RunObserver& observer = {});

/// Runs the experiment and records config.txt, diag.csv, snapshots, spectra
/// and manifest.txt under `dir`.
RunResult run_to_directory(const ExperimentConfig& config, const std::filesystem::path& dir,
                           bool force, const std::string& command = "simulate");

}  // namespace mgn
