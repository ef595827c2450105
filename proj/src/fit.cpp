#include "logcave/fit.hpp"

#include "logcave/compensated_sum.hpp"
#include "logcave/error.hpp"
#include "logcave/rho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace logcave {

namespace {

constexpr double linear_inverse_threshold = 1e-12;

} // namespace

LogConcaveFit::LogConcaveFit(SortedSample sample, ThetaVector theta)
  : sample_(std::move(sample))
  , theta_(std::move(theta))
{
  std::size_t n = sample_.size();
  if (theta_.values.size() != n) {
    throw Error(ErrorKind::length_mismatch,
                "theta has " + std::to_string(theta_.values.size()) +
                  " entries, sample has " + std::to_string(n));
  }
  slopes_ = omega_from_theta(theta_, sample_).slopes;

  cumulative_.resize(n);
  cumulative_[0] = 0.0;
  CompensatedSum running;
  CompensatedSum loglik;
  loglik += theta_.values[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double t = theta_.values[i + 1] - theta_.values[i];
    running += scaled_rho(theta_.values[i], t) * sample_.gap(i);
    cumulative_[i + 1] = running.value();
    loglik += theta_.values[i + 1];
  }
  log_likelihood_ = loglik.value();
  normalized_ = std::fabs(cumulative_.back() - 1.0) <= 1e-10;
}

std::size_t
LogConcaveFit::segment_of(double x) const
{
  auto knots = sample_.knots();
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t i = static_cast<std::size_t>(it - knots.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, knots.size() - 2);
}

double
LogConcaveFit::log_density_at(double x) const
{
  if (!(x >= support_min() && x <= support_max()))
    return -std::numeric_limits<double>::infinity();
  std::size_t i = segment_of(x);
  const auto& th = theta_.values;
  if (x == sample_.knot(i))
    return th[i];
  if (x == sample_.knot(i + 1))
    return th[i + 1];
  double frac = (x - sample_.knot(i)) / sample_.gap(i);
  return th[i] + frac * (th[i + 1] - th[i]);
}

double
LogConcaveFit::density_at(double x) const
{
  return std::exp(log_density_at(x));
}

double
LogConcaveFit::cdf_at(double x) const
{
  if (!(x > support_min()))
    return 0.0;
  if (!(x < support_max()))
    return 1.0;
  std::size_t i = segment_of(x);
  double u = x - sample_.knot(i);
  double partial = scaled_rho(theta_.values[i], slopes_[i] * u) * u;
  double value = (cumulative_[i] + partial) / cumulative_.back();
  return std::clamp(value, 0.0, 1.0);
}

double
LogConcaveFit::quantile(double p) const
{
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorKind::out_of_range, "quantile level must lie in [0, 1]");
  if (p == 0.0)
    return support_min();
  if (p == 1.0)
    return support_max();

  double target = p * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  i = std::min(i == 0 ? 0 : i - 1, sample_.size() - 2);

  double r = target - cumulative_[i];
  double dx = sample_.gap(i);
  if (r <= 0.0)
    return sample_.knot(i);

  // Solve exp(theta_i) * (exp(s u) - 1) / s = r for u.
  double s = slopes_[i];
  double scaled = std::exp(std::log(r) - theta_.values[i]);
  double u;
  if (std::fabs(s * dx) < linear_inverse_threshold) {
    u = scaled;
  } else {
    double z = s * scaled;
    u = z <= -1.0 ? dx : std::log1p(z) / s;
  }
  if (!std::isfinite(u))
    u = dx;
  u = std::clamp(u, 0.0, dx);
  return std::min(sample_.knot(i) + u, sample_.knot(i + 1));
}

std::vector<double>
LogConcaveFit::sample_from(Rng& rng, std::size_t m) const
{
  std::vector<double> draws(m);
  for (auto& d : draws)
    d = quantile(rng.uniform());
  return draws;
}

double
LogConcaveFit::mode() const
{
  const auto& th = theta_.values;
  auto it = std::max_element(th.begin(), th.end());
  return sample_.knot(static_cast<std::size_t>(it - th.begin()));
}

double
LogConcaveFit::max_density() const
{
  const auto& th = theta_.values;
  return std::exp(*std::max_element(th.begin(), th.end()));
}

} // namespace logcave
