#include "logcave/parametrization.hpp"

#include "logcave/compensated_sum.hpp"
#include "logcave/error.hpp"
#include "logcave/rho.hpp"

namespace logcave {

ThetaVector
theta_from_omega(const OmegaVector& omega, const SortedSample& sample)
{
  std::size_t n = sample.size();
  if (omega.slopes.size() + 1 != n) {
    throw Error(ErrorKind::length_mismatch,
                "omega has " + std::to_string(omega.slopes.size()) +
                  " slopes, sample needs " + std::to_string(n - 1));
  }
  ThetaVector theta;
  theta.values.resize(n);
  theta.values[0] = omega.intercept;
  for (std::size_t i = 1; i < n; ++i)
    theta.values[i] = theta.values[i - 1] + sample.gap(i - 1) * omega.slopes[i - 1];
  return theta;
}

OmegaVector
omega_from_theta(const ThetaVector& theta, const SortedSample& sample)
{
  std::size_t n = sample.size();
  if (theta.values.size() != n) {
    throw Error(ErrorKind::length_mismatch,
                "theta has " + std::to_string(theta.values.size()) +
                  " entries, sample has " + std::to_string(n));
  }
  OmegaVector omega;
  omega.intercept = theta.values[0];
  omega.slopes.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    omega.slopes[i] = (theta.values[i + 1] - theta.values[i]) / sample.gap(i);
  return omega;
}

double
normalization_mass(const ThetaVector& theta, const SortedSample& sample)
{
  std::size_t n = sample.size();
  if (theta.values.size() != n) {
    throw Error(ErrorKind::length_mismatch,
                "theta has " + std::to_string(theta.values.size()) +
                  " entries, sample has " + std::to_string(n));
  }
  CompensatedSum mass;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double t = theta.values[i + 1] - theta.values[i];
    mass += scaled_rho(theta.values[i], t) * sample.gap(i);
  }
  return mass.value();
}

bool
slopes_nonincreasing(std::span<const double> slopes, double tol)
{
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    if (slopes[i] > slopes[i - 1] + tol)
      return false;
  }
  return true;
}

bool
theta_in_cone(const ThetaVector& theta, const SortedSample& sample, double tol)
{
  OmegaVector omega = omega_from_theta(theta, sample);
  return slopes_nonincreasing(omega.slopes, tol);
}

} // namespace logcave
