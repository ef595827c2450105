#pragma once

#include "logcave/fit.hpp"
#include "logcave/objective.hpp"
#include "logcave/parametrization.hpp"
#include "logcave/sample.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace logcave {

struct IcmConfig
{
  //! The concave-majorant iteration stops once
  //! |phi_new - phi_old| <= phi_tolerance * (1 + |phi_old|), or when no
  //! ascent is left along the surrogate direction.
  double phi_tolerance = 1e-8;
  //! A fit is reported converged when its final KKT residual is at most
  //! this, whichever way the iteration stopped.
  double kkt_tolerance = 1e-7;
  std::size_t max_iterations = 1000;
  std::size_t max_halvings = 60;
  //! Relative floor on the diagonal curvature, see apply_curvature_floor.
  double curvature_floor = default_curvature_floor;
  //! Once the concave-majorant iteration stops, refine with Newton steps on
  //! the block structure (runs of equal slopes) of its last surrogate
  //! solution, merging and splitting blocks as needed. Off gives the plain
  //! diagonal iteration.
  bool block_newton = true;
  std::size_t newton_steps = 500;
  //! Seed the refinement with a single block if the surrogate has more.
  std::size_t newton_max_blocks = 256;
};

struct IcmState
{
  OmegaVector omega;
  //! Objective values are kept in extended precision so that the ascent
  //! test can resolve gains below the spacing of doubles.
  long double phi = 0.0L;
  std::size_t iteration = 0;
};

struct IcmReport
{
  //! phi at the starting point followed by every accepted iterate.
  std::vector<long double> phi_trace;
  //! Line-search step fraction per iteration (1, 1/2, 1/4, ...).
  std::vector<double> step_sizes;
  //! Newton steps taken by the refinement; 0 if it was off or not accepted.
  //! An accepted refinement appends one final entry to phi_trace.
  std::size_t newton_steps = 0;
  bool converged = false;
  std::size_t iterations = 0;
  double kkt_residual = 0.0;
  bool uniform_start = false;
};

struct FitResult
{
  LogConcaveFit fit;
  OmegaVector omega;
  IcmReport report;
};

struct LineSearchStep
{
  OmegaVector omega;
  long double phi;
  double step;
};

//! Starting point from the moment-matched normal: slopes of the piecewise
//! linear interpolant of -(x - mean)^2 / (2 s^2), intercept restored so the
//! density integrates to one.
OmegaVector initialize_normal(const SortedSample& sample);

//! All slopes zero; the uniform density on [x_1, x_n].
OmegaVector initialize_uniform(const SortedSample& sample);

//! One surrogate maximisation: weighted antitonic projection of
//! omega + b / d followed by restoring the intercept. Throws
//! Error(step_failure) if the current point overflows.
OmegaVector icm_candidate(const IcmState& state,
                          const SortedSample& sample,
                          const IcmConfig& config = {});

//! Halves the step towards `candidate` until phi strictly increases.
//! std::nullopt means no ascent within config.max_halvings.
std::optional<LineSearchStep> line_search(const IcmState& state,
                                          const OmegaVector& candidate,
                                          const IcmConfig& config,
                                          const SortedSample& sample);

FitResult fit(const SortedSample& sample, const IcmConfig& config = {});

//! First-order optimality violation of a feasible point: the largest of
//! |dphi/domega_1|, |block sums of the slope gradient| over runs of equal
//! slopes, and positive parts of prefix sums of the slope gradient. Throws
//! Error(infeasible_point) if slopes increase anywhere.
double kkt_residual(const OmegaVector& omega, const SortedSample& sample);

//! Same measure from an already computed length-n gradient.
double kkt_residual(std::span<const double> slopes, std::span<const double> gradient);

} // namespace logcave
