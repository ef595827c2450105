#pragma once

#include "logcave/parametrization.hpp"
#include "logcave/rng.hpp"
#include "logcave/sample.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace logcave {

//! Piecewise log-linear density with knots at the sample points, zero
//! outside [x_1, x_n]. Immutable; safe to share between threads.
class LogConcaveFit
{
public:
  LogConcaveFit(SortedSample sample, ThetaVector theta);

  const SortedSample& sample() const noexcept { return sample_; }
  std::span<const double> theta() const noexcept { return theta_.values; }
  OmegaVector omega() const { return omega_from_theta(theta_, sample_); }

  //! sum_i theta_i.
  double log_likelihood() const noexcept { return log_likelihood_; }
  //! Analytic mass before any renormalisation.
  double mass() const noexcept { return cumulative_.back(); }
  //! |mass - 1| <= 1e-10.
  bool normalized() const noexcept { return normalized_; }

  //! -infinity outside the support.
  double log_density_at(double x) const;
  double density_at(double x) const;
  double cdf_at(double x) const;
  //! Throws Error(out_of_range) unless 0 <= p <= 1.
  double quantile(double p) const;
  std::vector<double> sample_from(Rng& rng, std::size_t m) const;
  //! Leftmost knot with maximal theta.
  double mode() const;
  double max_density() const;

  double support_min() const { return sample_.front(); }
  double support_max() const { return sample_.back(); }

private:
  //! Segment index i such that x_i <= x <= x_{i+1}; x must be in the support.
  std::size_t segment_of(double x) const;

  SortedSample sample_;
  ThetaVector theta_;
  std::vector<double> slopes_;
  //! cumulative_[i] = mass of [x_1, x_{i+1}] (0-based knots), so
  //! cumulative_.front() == 0.
  std::vector<double> cumulative_;
  double log_likelihood_ = 0.0;
  bool normalized_ = false;
};

inline double
log_density_at(const LogConcaveFit& fit, double x)
{
  return fit.log_density_at(x);
}

inline double
cdf_at(const LogConcaveFit& fit, double x)
{
  return fit.cdf_at(x);
}

inline double
quantile(const LogConcaveFit& fit, double p)
{
  return fit.quantile(p);
}

inline std::vector<double>
sample_from_fit(const LogConcaveFit& fit, Rng& rng, std::size_t m)
{
  return fit.sample_from(rng, m);
}

inline double
mode_of(const LogConcaveFit& fit)
{
  return fit.mode();
}

} // namespace logcave
