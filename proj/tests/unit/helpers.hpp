#pragma once

#include <cmath>
#include <random>

#include "mgn/spectral.hpp"

namespace mgn::test {

/// Smooth random periodic field: a few low modes with random amplitudes and phases.
inline Field random_smooth(const Grid& grid, std::mt19937_64& rng, double amplitude,
                           int modes = 6) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(modes), phase(modes);
  for (int m = 0; m < modes; ++m) {
    a[m] = u(rng) / (1.0 + m);
    phase[m] = 3.14159 * u(rng);
  }
  Field f(grid);
  double peak = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    double s = 0.0;
    for (int m = 0; m < modes; ++m) s += a[m] * std::cos((m + 1) * grid.dk() * x + phase[m]);
    f[j] = s;
    peak = std::max(peak, std::abs(s));
  }
  if (peak > 0.0) f *= amplitude / peak;
  return f;
}

inline double max_diff(const Field& a, const Field& b) { return (a - b).max_abs(); }

}  // namespace mgn::test
