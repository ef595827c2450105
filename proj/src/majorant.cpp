#include "logcave/majorant.hpp"

#include "logcave/error.hpp"

#include <cmath>

namespace logcave {

namespace {

struct Block
{
  double weight;
  double value;
  std::size_t count;

  double mean() const { return value / weight; }
};

} // namespace

std::vector<double>
concave_majorant_slopes(std::span<const double> weights,
                        std::span<const double> values)
{
  if (weights.size() != values.size()) {
    throw Error(ErrorKind::length_mismatch,
                "weights and values differ in length");
  }
  std::vector<Block> stack;
  stack.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorKind::non_positive_weight,
                  "weight " + std::to_string(i) + " is not positive");
    }
    stack.push_back({ weights[i], values[i], 1 });
    // a rising pair of adjacent blocks violates concavity; pool them
    while (stack.size() > 1 &&
           stack[stack.size() - 2].mean() < stack.back().mean()) {
      Block top = stack.back();
      stack.pop_back();
      stack.back().weight += top.weight;
      stack.back().value += top.value;
      stack.back().count += top.count;
    }
  }

  std::vector<double> out;
  out.reserve(weights.size());
  for (const Block& b : stack)
    out.insert(out.end(), b.count, b.mean());
  return out;
}

} // namespace logcave
