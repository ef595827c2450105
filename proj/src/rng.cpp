#include "logcave/rng.hpp"

#include <cmath>
#include <numbers>

namespace logcave {

double
Rng::exponential()
{
  return -std::log(uniform_open());
}

double
Rng::normal()
{
  double radius = std::sqrt(-2.0 * std::log(uniform_open()));
  double angle = 2.0 * std::numbers::pi * uniform();
  return radius * std::cos(angle);
}

} // namespace logcave
