#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mgn/multipliers.hpp"
#include "mgn/params.hpp"

namespace mgn {

enum class ModelKind { GreenNaghdi, SaintVenant };

enum class InitialKind {
  Gaussian,   ///< zeta = A exp(-width x^2), w = 0
  Rest,       ///< zeta = 0, w = 0
  Mode,       ///< zeta = A cos(k_m x), w = 0
  ShearMode,  ///< constant flux ic_shear plus a mode-m perturbation on its unstable branch
};

/// A complete, validated experiment description. Defaults reproduce the
/// reference run: 512 points on [-4, 4), zeta0 = -exp(-4 x^2), w0 = 0.
struct ExperimentConfig {
  PhysParams params;
  ModelKind model = ModelKind::GreenNaghdi;
  /// "id", "reg", "imp" or "custom:<path>".
  std::string multiplier = "reg";
  /// Regularized family parameters. With theta_natural they track delta as
  /// theta_i = 1/(15 delta_i^2); the key value `natural` selects this.
  double theta1 = 1.0 / 15.0;
  double theta2 = 4.0 / 15.0;
  bool theta_natural = true;

  std::size_t n = 512;
  double half_length = 4.0;
  double t_end = 2.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double min_dt = 1e-14;

  InitialKind initial = InitialKind::Gaussian;
  double ic_amplitude = -1.0;
  double ic_width = 4.0;
  std::size_t ic_mode = 1;
  double ic_shear = 0.0;

  /// Times at which snapshots (and spectra) are written; t_end is always added.
  std::vector<double> snapshot_times;
  bool spectra = true;
  std::size_t diag_stride = 1;
  bool dealias = false;
  double cg_tol = 1e-12;
  std::size_t cg_max_iter = 200;
  /// Band edge for high_band; 0 selects half the Nyquist wavenumber.
  double k_band = 0.0;

  double k_min = 0.01;
  double k_max = 100.0;
  std::size_t k_count = 1000;

  double admissibility_k_max = 100.0;
  std::size_t admissibility_samples = 100;

  /// Resolves `multiplier` (and loads custom tables).
  MultiplierSpec multiplier_spec() const;

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses a flat `key = value` document with `#` comments. Unspecified keys
/// keep their defaults; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Writes every key, with reals at 17 significant digits, so that
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

const char* to_string(ModelKind kind);
const char* to_string(InitialKind kind);

}  // namespace mgn
