#pragma once

#include "logcave/parametrization.hpp"
#include "logcave/sample.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace logcave {

//! Runs of exactly equal slopes. Block b covers slopes
//! [start[b], start[b + 1]), with start.back() == number of slopes.
struct SlopeBlocks
{
  std::vector<std::size_t> start;

  std::size_t count() const { return start.size() - 1; }
};

SlopeBlocks blocks_of(std::span<const double> slopes);

std::vector<double> expand_blocks(const SlopeBlocks& blocks,
                                  std::span<const double> values,
                                  std::size_t slope_count);

//! The log-likelihood minus n, as a function of the common slope of each
//! block with the intercept eliminated through the normalisation:
//!   value = sum_j theta'_j - n log(int exp theta') - n,
//! where theta' is the log-density with a zero intercept.
struct BlockModel
{
  double value = 0.0;
  Eigen::VectorXd gradient;
  //! Exact (dense, negative definite) Hessian in block coordinates.
  Eigen::MatrixXd hessian;
};

//! O(n + K^2) for K blocks.
BlockModel block_model(const SortedSample& sample,
                       const SlopeBlocks& blocks,
                       std::span<const double> block_values);

struct BlockNewtonResult
{
  OmegaVector omega;
  long double phi;
  std::size_t newton_steps = 0;
  //! Ended at a point where no block can be split profitably, i.e. the
  //! within-block prefix sums of the slope gradient are all <= split_tolerance.
  bool stationary = false;
};

//! Newton refinement on a block structure that starts from the ties of
//! `start` and is then adjusted: blocks whose values collide are merged, and
//! a block is split where the prefix sum of the slope gradient inside it is
//! largest once the block values are stationary. Every accepted Newton step
//! strictly increases phi. Returns the final point (which may still be below
//! any caller-side reference value).
BlockNewtonResult block_newton_refine(const SortedSample& sample,
                                      std::span<const double> start_slopes,
                                      std::size_t max_steps,
                                      std::size_t max_halvings,
                                      double split_tolerance);

} // namespace logcave
