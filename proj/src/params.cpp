#include "mgn/params.hpp"

#include <cmath>
#include <limits>

#include "mgn/errors.hpp"

namespace mgn {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw ValidationError(name, "must be finite");
  }
}

}  // namespace

void PhysParams::validate() const {
  require_finite(gamma, "gamma");
  require_finite(epsilon, "epsilon");
  require_finite(mu, "mu");
  require_finite(delta, "delta");
  require_finite(inv_bond, "inv_bond");
  if (gamma < 0.0 || gamma >= 1.0) {
    throw ValidationError("gamma", "must satisfy 0 <= gamma < 1");
  }
  if (epsilon < 0.0) {
    throw ValidationError("epsilon", "must be >= 0");
  }
  if (mu < 0.0) {
    throw ValidationError("mu", "must be >= 0");
  }
  if (delta <= 0.0) {
    throw ValidationError("delta", "must be > 0");
  }
  if (inv_bond < 0.0) {
    throw ValidationError("inv_bond", "must be >= 0");
  }
}

double upsilon_F(const PhysParams& params, double kf1, double kf2, double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw DomainError("upsilon_F: sigma must lie in [0, 1]");
  }
  const double eps2 = params.epsilon * params.epsilon;
  if (eps2 == 0.0) {
    return 0.0;
  }
  const double exponent = 1.0 - sigma;
  double mu_bo_power = 1.0;
  if (exponent > 0.0) {
    if (params.inv_bond == 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    mu_bo_power = std::pow(params.mu / params.inv_bond, exponent);
  }
  return eps2 * (1.0 + (params.gamma * kf1 + kf2) * mu_bo_power);
}

}  // namespace mgn
