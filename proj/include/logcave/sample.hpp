#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace logcave {

enum class TieHandling
{
  reject,
  jitter
};

//! Strictly increasing observation knots x_1 < ... < x_n (n >= 2) together
//! with their gaps. Immutable after construction.
class SortedSample
{
public:
  //! Validates, sorts and (optionally) jitters raw observations.
  static SortedSample from_raw(std::span<const double> raw,
                               TieHandling ties = TieHandling::reject);

  //! Wraps knots that are already strictly increasing; throws otherwise.
  static SortedSample from_sorted(std::vector<double> knots);

  std::size_t size() const noexcept { return knots_.size(); }
  std::span<const double> knots() const noexcept { return knots_; }
  double knot(std::size_t i) const { return knots_[i]; }

  //! gaps()[i] = x_{i+1} - x_i for 0-based i in [0, n-1); i.e. the gap
  //! ending at knot i+1.
  std::span<const double> gaps() const noexcept { return gaps_; }
  double gap(std::size_t i) const { return gaps_[i]; }

  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  double range() const { return knots_.back() - knots_.front(); }

private:
  explicit SortedSample(std::vector<double> knots);

  std::vector<double> knots_;
  std::vector<double> gaps_;
};

//! Free-function spelling of SortedSample::from_raw.
inline SortedSample
validate_sample(std::span<const double> raw,
                TieHandling ties = TieHandling::reject)
{
  return SortedSample::from_raw(raw, ties);
}

} // namespace logcave
