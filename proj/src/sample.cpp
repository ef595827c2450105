#include "logcave/sample.hpp"

#include "logcave/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace logcave {

namespace {

std::string
format_value(double v)
{
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void
check_strict(const std::vector<double>& knots)
{
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i - 1] < knots[i])) {
      throw Error(ErrorKind::ties,
                  "duplicated value " + format_value(knots[i]) +
                    " in sample (enable tie jittering to accept ties)");
    }
  }
}

} // namespace

SortedSample::SortedSample(std::vector<double> knots)
  : knots_(std::move(knots))
{
  gaps_.resize(knots_.size() - 1);
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    gaps_[i] = knots_[i + 1] - knots_[i];
    if (!(gaps_[i] > 0.0) || !std::isfinite(gaps_[i])) {
      throw Error(ErrorKind::non_finite,
                  "gap between " + format_value(knots_[i]) + " and " +
                    format_value(knots_[i + 1]) + " is not finite and positive");
    }
  }
}

SortedSample
SortedSample::from_sorted(std::vector<double> knots)
{
  if (knots.size() < 2) {
    throw Error(ErrorKind::too_few_points, "sample needs at least 2 points");
  }
  for (double v : knots) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::non_finite, "sample contains a non-finite value");
    }
  }
  check_strict(knots);
  return SortedSample(std::move(knots));
}

SortedSample
SortedSample::from_raw(std::span<const double> raw, TieHandling ties)
{
  if (raw.size() < 2) {
    throw Error(ErrorKind::too_few_points, "sample needs at least 2 points");
  }
  std::vector<double> x(raw.begin(), raw.end());
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::non_finite, "sample contains a non-finite value");
    }
  }
  std::sort(x.begin(), x.end());

  if (ties == TieHandling::jitter) {
    double range = x.back() - x.front();
    if (!(range > 0.0)) {
      throw Error(ErrorKind::ties,
                  "all values equal " + format_value(x.front()) +
                    "; jittering cannot separate them");
    }
    // k-th repeat of a value is shifted by k * eps, eps = 1e-9 * range
    double eps = 1e-9 * range;
    std::size_t run_start = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (x[i] == x[run_start]) {
        x[i] += static_cast<double>(i - run_start) * eps;
      } else {
        run_start = i;
      }
    }
    std::sort(x.begin(), x.end());
  }

  check_strict(x);
  return SortedSample(std::move(x));
}

} // namespace logcave
