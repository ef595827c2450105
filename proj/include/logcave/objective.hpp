#pragma once

#include "logcave/parametrization.hpp"
#include "logcave/rho.hpp"
#include "logcave/sample.hpp"

#include <limits>
#include <span>
#include <vector>

namespace logcave {

//! Largest log-density value that is exponentiated; anything above makes the
//! objective evaluate to -infinity.
inline constexpr double theta_overflow_cap = 700.0;

inline constexpr double default_curvature_floor = 1e-12;

//! Objective value and derivatives at one omega. The Lagrange multiplier is
//! fixed to the sample size, so
//!   phi(omega) = sum_j theta_j - n * sum_j exp(theta_{j-1}) rho(dx_j w_j) dx_j.
struct ObjectiveEvaluation
{
  double phi = -std::numeric_limits<double>::infinity();
  bool overflow = false;
  //! gradient[0] = dphi/domega_1; gradient[1 + i] = dphi/dslopes[i].
  std::vector<double> gradient;
  //! curvature[i] = -d^2 phi / dslopes[i]^2, before any flooring.
  std::vector<double> curvature;
};

//! Evaluation context bound to one sample. Scratch buffers are reused across
//! calls but rebuilt from scratch for every omega, so one workspace can serve
//! a whole solver run. Not thread-safe; use one per thread.
class ObjectiveWorkspace
{
public:
  explicit ObjectiveWorkspace(const SortedSample& sample);

  const SortedSample& sample() const noexcept { return *sample_; }

  double phi(const OmegaVector& omega);

  //! phi accumulated in extended precision; the solver compares these.
  long double phi_extended(const OmegaVector& omega);

  //! Objective plus gradient and diagonal curvature, O(n).
  const ObjectiveEvaluation& evaluate(const OmegaVector& omega);

private:
  bool fill_theta(const OmegaVector& omega);

  const SortedSample* sample_;
  std::vector<double> theta_;
  std::vector<double> segment_mass_;
  std::vector<RhoValues> terms_;
  ObjectiveEvaluation eval_;
};

double phi(const OmegaVector& omega, const SortedSample& sample);

//! Length-n gradient; throws Error(step_failure) when theta overflows.
std::vector<double> grad_phi(const OmegaVector& omega,
                             const SortedSample& sample);

//! d_k = -d^2 phi / domega_k^2 for the slopes, floored at
//! floor_factor * max(1, max_k d_k). A zero factor disables the floor.
std::vector<double> diag_curvature(const OmegaVector& omega,
                                   const SortedSample& sample,
                                   double floor_factor = default_curvature_floor);

void apply_curvature_floor(std::span<double> curvature, double floor_factor);

//! Intercept that makes the piecewise log-linear density integrate to one.
double omega1_from_constraint(std::span<const double> slopes,
                              const SortedSample& sample);

//! Copies the slopes and sets the intercept from omega1_from_constraint.
OmegaVector restore_intercept(std::vector<double> slopes,
                              const SortedSample& sample);

} // namespace logcave
