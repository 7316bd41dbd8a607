#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mgn {

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  /// Stage evaluations that threw a recoverable model error and forced a
  /// step rejection.
  std::size_t failed_stages = 0;
};

/// Error control for the embedded pair. Per-component weight
/// abs_tol + rel_tol * max(|y_old|, |y_new|); a step is accepted when the
/// RMS weighted error is <= 1.
struct StepController {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 5.0;
  /// Steps below this size are reported as a blow-up.
  double min_dt = 1e-14;
  /// 0 selects an initial step automatically.
  double initial_dt = 0.0;
  double max_dt = 0.0;  ///< 0 = unbounded
  StepStats stats;
};

using RhsFn = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Called after every accepted step; returning false cancels the run.
/// `at_stop` is true when t coincides with one of the requested stop times.
using StepCallback =
    std::function<bool(double t, std::span<const double> y, const StepStats& stats, bool at_stop)>;

enum class IntegrationStatus { Completed, Cancelled, StepUnderflow };

struct IntegrationResult {
  IntegrationStatus status = IntegrationStatus::Completed;
  double t = 0.0;
  /// State at `t`: the final state, or the last accepted state on failure.
  std::vector<double> y;
  StepStats stats;
  std::string message;
};

/// Predicate deciding whether an exception thrown by the rhs should reject
/// the current step (true) or propagate (false).
using RecoverablePredicate = std::function<bool(const std::exception&)>;

/// Adaptive Dormand-Prince 5(4) integration from t0 to t1. Steps are
/// truncated to land exactly on every entry of `stop_times` within (t0, t1].
IntegrationResult integrate(std::vector<double> y0, const RhsFn& rhs, double t0, double t1,
                            StepController& controller, std::vector<double> stop_times = {},
                            const StepCallback& callback = nullptr,
                            const RecoverablePredicate& recoverable = nullptr);

}  // namespace mgn
