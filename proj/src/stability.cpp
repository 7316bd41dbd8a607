#include "mgn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <thread>
#include <vector>

#include "mgn/errors.hpp"

namespace mgn {

namespace {

// tanh(x)/x, with its series below the cancellation-prone range.
double tanhc(double x) {
  x = std::abs(x);
  if (x < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0;
  }
  return std::tanh(x) / x;
}

struct EulerGroups {
  double s1;  // tanh(x)/x, x = sqrt(mu)|k|
  double s2;  // tanh(x/delta)/(x/delta)
};

EulerGroups euler_groups(double k, const PhysParams& p) {
  const double x = std::sqrt(p.mu) * std::abs(k);
  return {tanhc(x), tanhc(x / p.delta)};
}

}  // namespace

double euler_shear_coefficient(double k, const PhysParams& p) {
  // sqrt(mu)|k| gamma / (tanh x + gamma tanh(x/delta)) * (delta+1)^2, after
  // dividing numerator and denominator by x.
  const auto [s1, s2] = euler_groups(k, p);
  const double d = p.delta;
  const double g = p.gamma;
  return g * (d + 1.0) * (d + 1.0) * d / (d * s1 + g * s2);
}

LinearCoeffs euler_coeffs(double k, const PhysParams& p, double vbar) {
  const auto [s1, s2] = euler_groups(k, p);
  const double d = p.delta;
  const double g = p.gamma;
  const double gd = g + d;
  const double ev = p.epsilon * vbar;
  LinearCoeffs out;
  out.c = (d * d * s1 - g * s2) / (d * s1 + g * s2) * ev / gd;
  out.b = s1 * s2 / (d * s1 + g * s2);
  const double shear = g * d / (d * s1 + g * s2) * (d + 1.0) * (d + 1.0) / (gd * gd);
  out.a = gd * (1.0 + k * k * p.inv_bond) - shear * ev * ev;
  return out;
}

namespace {

struct ModelGroups {
  double f1sq;
  double f2sq;
  double denom;  // 1 + mu (F2^2 + gamma delta F1^2) k^2 / (3 delta (gamma+delta))
};

ModelGroups model_groups(double k, const PhysParams& p, const MultiplierSpec& spec) {
  const double f1 = eval_F(spec, Layer::Upper, k, p.mu, p.delta);
  const double f2 = eval_F(spec, Layer::Lower, k, p.mu, p.delta);
  ModelGroups g;
  g.f1sq = f1 * f1;
  g.f2sq = f2 * f2;
  const double gd = p.gamma + p.delta;
  g.denom = 1.0 + p.mu * (g.f2sq + p.gamma * p.delta * g.f1sq) * k * k / (3.0 * p.delta * gd);
  return g;
}

}  // namespace

double model_shear_coefficient(double k, const PhysParams& p, const MultiplierSpec& spec) {
  const auto g = model_groups(k, p, spec);
  const double d = p.delta;
  const double gd = p.gamma + d;
  const double mk2 = p.mu * k * k / 3.0;
  return p.gamma * (d + 1.0) * (d + 1.0) / (d * gd) * (d * d + mk2 * g.f2sq) *
         (1.0 + mk2 * g.f1sq) / g.denom;
}

LinearCoeffs model_coeffs(double k, const PhysParams& p, const MultiplierSpec& spec,
                          double wbar) {
  const auto g = model_groups(k, p, spec);
  const double d = p.delta;
  const double gd = p.gamma + d;
  const double ew = p.epsilon * wbar;
  LinearCoeffs out;
  out.c = ew * ((d * d - p.gamma) / gd + p.mu * (g.f2sq - p.gamma * g.f1sq) * k * k / (3.0 * gd)) /
          g.denom;
  out.b = (1.0 / gd) / g.denom;
  out.a = gd * (1.0 + k * k * p.inv_bond) - ew * ew * model_shear_coefficient(k, p, spec);
  return out;
}

namespace {

StabilityCurve curve_from(const std::vector<double>& k_grid, const PhysParams& p,
                          const std::string& name, auto&& shear_coefficient) {
  for (double k : k_grid) {
    if (!(k > 0.0)) {
      throw DomainError("threshold_curve: wavenumbers must be positive");
    }
  }
  StabilityCurve curve;
  curve.model = name;
  curve.k = k_grid;
  curve.threshold.resize(k_grid.size());
  const double gd = p.gamma + p.delta;
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double k = k_grid[i];
      const double gamma_k = shear_coefficient(k);
      curve.threshold[i] = gamma_k > 0.0 ? gd * (1.0 + k * k * p.inv_bond) / gamma_k
                                         : std::numeric_limits<double>::quiet_NaN();
    }
  };
  // Each k is independent; large grids are split across threads.
  constexpr std::size_t kChunk = 4096;
  const std::size_t n = k_grid.size();
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n / kChunk);
  if (workers <= 1) {
    fill(0, n);
    return curve;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(fill, n * w / workers, n * (w + 1) / workers);
    }
  }
  return curve;
}

}  // namespace

StabilityCurve threshold_curve(const std::vector<double>& k_grid, const PhysParams& params,
                               const MultiplierSpec& spec) {
  return curve_from(k_grid, params, spec.name(),
                    [&](double k) { return model_shear_coefficient(k, params, spec); });
}

StabilityCurve euler_threshold_curve(const std::vector<double>& k_grid,
                                     const PhysParams& params) {
  return curve_from(k_grid, params, "euler",
                    [&](double k) { return euler_shear_coefficient(k, params); });
}

std::pair<double, double> symbol_eigenvalue(const LinearCoeffs& m) {
  // [[c, b], [a, c]]: trace 2c, determinant c^2 - ab.
  const std::complex<double> disc = std::sqrt(std::complex<double>(m.a * m.b, 0.0));
  const std::complex<double> root = m.c + (disc.imag() >= 0.0 ? disc : -disc);
  return {root.real(), root.imag()};
}

double growth_rate(double k, const PhysParams& params, const MultiplierSpec& spec, double wbar) {
  const auto coeffs = model_coeffs(k, params, spec, wbar);
  const auto [re, im] = symbol_eigenvalue(coeffs);
  (void)re;
  return std::abs(k) * im;
}

std::vector<double> linspace(double k_min, double k_max, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = k_min;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = k_min + (k_max - k_min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

void write_threshold_csv(std::ostream& out, const std::vector<double>& k_grid,
                         const PhysParams& params, const MultiplierSpec& regularized) {
  const auto original = threshold_curve(k_grid, params, MultiplierSpec::identity());
  const auto reg = threshold_curve(k_grid, params, regularized);
  const auto imp = threshold_curve(k_grid, params, MultiplierSpec::improved());
  const auto euler = euler_threshold_curve(k_grid, params);
  out << "k,threshold_original,threshold_regularized,threshold_improved,threshold_euler\n";
  char buf[128];
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", k_grid[i],
                  original.threshold[i], reg.threshold[i], imp.threshold[i], euler.threshold[i]);
    out << buf;
  }
}

}  // namespace mgn
