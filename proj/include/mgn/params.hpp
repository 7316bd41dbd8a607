#pragma once

namespace mgn {

/// Dimensionless parameters of the two-layer problem.
///
/// gamma = rho1/rho2, epsilon = a/d1, mu = d1^2/lambda^2, delta = d1/d2 and
/// inv_bond = 1/Bo. Layer 1 is the upper (lighter) layer.
struct PhysParams {
  double gamma = 0.95;
  double epsilon = 0.5;
  double mu = 0.1;
  double delta = 0.5;
  double inv_bond = 5e-4;

  /// Throws ValidationError naming the first field out of range.
  void validate() const;

  /// gamma + delta, the coefficient that appears in front of every
  /// hydrostatic and capillary term.
  double gamma_plus_delta() const { return gamma + delta; }

  bool operator==(const PhysParams&) const = default;
};

/// Kelvin-Helmholtz parameter eps^2 (1 + (gamma K1 + K2) (mu Bo)^(1 - sigma)).
///
/// Returns +infinity when inv_bond == 0 and sigma < 1: without surface
/// tension only the regularized (sigma = 1) case has a finite value.
/// Throws DomainError when sigma is outside [0, 1].
double upsilon_F(const PhysParams& params, double kf1, double kf2, double sigma);

}  // namespace mgn
