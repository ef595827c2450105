#pragma once

#include "logcave/sample.hpp"

#include <span>
#include <vector>

namespace logcave {

//! Log-density values at the knots, theta_i = log g(x_i).
struct ThetaVector
{
  std::vector<double> values;
};

//! Intercept (= theta_1) plus the n-1 segment slopes. slopes[i] is the slope
//! on the gap between knots i and i+1; a feasible point has nonincreasing
//! slopes.
struct OmegaVector
{
  double intercept = 0.0;
  std::vector<double> slopes;
};

ThetaVector theta_from_omega(const OmegaVector& omega,
                             const SortedSample& sample);

OmegaVector omega_from_theta(const ThetaVector& theta,
                             const SortedSample& sample);

//! Integral of exp(piecewise-linear theta) over [x_1, x_n], evaluated as
//! sum_j exp(theta_{j-1}) rho(theta_j - theta_{j-1}) dx_j.
double normalization_mass(const ThetaVector& theta,
                          const SortedSample& sample);

//! True when slopes[i] >= slopes[i+1] - tol for all i.
bool slopes_nonincreasing(std::span<const double> slopes, double tol = 0.0);

//! Membership of theta in the cone of concave piecewise-linear log-densities,
//! up to an absolute tolerance on the difference quotients.
bool theta_in_cone(const ThetaVector& theta,
                   const SortedSample& sample,
                   double tol = 0.0);

} // namespace logcave
