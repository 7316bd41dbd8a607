#include "mgn/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgn/errors.hpp"

namespace mgn {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th-order and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

double weighted_rms(std::span<const double> err, std::span<const double> y0,
                    std::span<const double> y1, double atol, double rtol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = err[i] / scale;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace

IntegrationResult integrate(std::vector<double> y0, const RhsFn& rhs, double t0, double t1,
                            StepController& ctl, std::vector<double> stop_times,
                            const StepCallback& callback, const RecoverablePredicate& recoverable) {
  if (!(ctl.rel_tol > 0.0) || !(ctl.abs_tol > 0.0)) {
    throw ValidationError("rel_tol", "tolerances must be positive");
  }
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw ValidationError("t_end", "integration interval must be finite and nonempty");
  }
  std::erase_if(stop_times, [&](double s) { return !(s > t0 && s < t1); });
  stop_times.push_back(t1);
  std::sort(stop_times.begin(), stop_times.end());
  stop_times.erase(std::unique(stop_times.begin(), stop_times.end()), stop_times.end());

  const std::size_t n = y0.size();
  std::vector<double> y = std::move(y0), ynew(n), tmp(n), err(n);
  std::vector<std::vector<double>> k(7, std::vector<double>(n));

  IntegrationResult result;
  auto& stats = ctl.stats;

  auto eval = [&](double t, const std::vector<double>& state, std::vector<double>& out) {
    ++stats.rhs_evaluations;
    rhs(t, state, out);
  };

  double t = t0;
  eval(t, y, k[0]);

  double dt = ctl.initial_dt;
  if (!(dt > 0.0)) {
    // Hairer-Norsett-Wanner starting step from the first derivative only.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = ctl.abs_tol + ctl.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k[0][i] / sc) * (k[0][i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    dt = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    dt = std::min(dt, t1 - t0);
  }
  if (ctl.max_dt > 0.0) dt = std::min(dt, ctl.max_dt);

  std::size_t next_stop = 0;
  bool last_failed = false;

  while (t < t1) {
    const double stop = stop_times[next_stop];
    bool hits_stop = false;
    double h = dt;
    if (t + h >= stop || stop - (t + h) < 1e-12 * std::max(1.0, std::abs(stop))) {
      h = stop - t;
      hits_stop = true;
    }
    if (h < ctl.min_dt && !hits_stop) {
      result.status = IntegrationStatus::StepUnderflow;
      result.message = "step size underflow (dt = " + std::to_string(h) + ") at t = " +
                       std::to_string(t);
      break;
    }

    bool stage_failed = false;
    try {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
      eval(t + c2 * h, tmp, k[1]);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
      eval(t + c3 * h, tmp, k[2]);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
      eval(t + c4 * h, tmp, k[3]);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
      eval(t + c5 * h, tmp, k[4]);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                             a65 * k[4][i]);
      eval(t + h, tmp, k[5]);
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] +
                              b6 * k[5][i]);
      eval(t + h, ynew, k[6]);
    } catch (const std::exception& ex) {
      if (!recoverable || !recoverable(ex)) throw;
      stage_failed = true;
      ++stats.failed_stages;
      result.message = ex.what();
    }

    double err_norm = std::numeric_limits<double>::infinity();
    if (!stage_failed) {
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                      e6 * k[5][i] + e7 * k[6][i]);
      }
      err_norm = weighted_rms(err, y, ynew, ctl.abs_tol, ctl.rel_tol);
    }

    if (!std::isfinite(err_norm) || err_norm > 1.0) {
      ++stats.rejected;
      const double factor =
          std::isfinite(err_norm)
              ? std::max(ctl.min_factor, ctl.safety * std::pow(err_norm, -0.2))
              : 0.25;
      dt = h * std::min(factor, 1.0);
      last_failed = true;
      if (dt < ctl.min_dt) {
        result.status = IntegrationStatus::StepUnderflow;
        result.message = "step size underflow (dt = " + std::to_string(dt) + ") at t = " +
                         std::to_string(t) +
                         (stage_failed ? " after: " + result.message : std::string());
        break;
      }
      continue;
    }

    ++stats.accepted;
    t = hits_stop ? stop : t + h;
    std::swap(y, ynew);
    std::swap(k[0], k[6]);  // first-same-as-last

    double factor = err_norm == 0.0 ? ctl.max_factor
                                    : ctl.safety * std::pow(err_norm, -0.2);
    factor = std::clamp(factor, ctl.min_factor, ctl.max_factor);
    if (last_failed) factor = std::min(factor, 1.0);
    last_failed = false;
    // A step truncated to hit a stop time does not shrink the next proposal.
    const double base = hits_stop ? std::max(h, dt) : h;
    dt = base * factor;
    if (ctl.max_dt > 0.0) dt = std::min(dt, ctl.max_dt);

    if (hits_stop) ++next_stop;
    if (callback && !callback(t, y, stats, hits_stop)) {
      result.status = IntegrationStatus::Cancelled;
      break;
    }
  }

  result.t = t;
  result.y = std::move(y);
  result.stats = stats;
  return result;
}

}  // namespace mgn
