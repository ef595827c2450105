#include "logcave/block_newton.hpp"

#include "logcave/compensated_sum.hpp"
#include "logcave/error.hpp"
#include "logcave/objective.hpp"
#include "logcave/rho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace logcave {

SlopeBlocks
blocks_of(std::span<const double> slopes)
{
  SlopeBlocks blocks;
  blocks.start.push_back(0);
  for (std::size_t k = 1; k < slopes.size(); ++k) {
    if (slopes[k] != slopes[k - 1])
      blocks.start.push_back(k);
  }
  blocks.start.push_back(slopes.size());
  return blocks;
}

std::vector<double>
expand_blocks(const SlopeBlocks& blocks,
              std::span<const double> values,
              std::size_t slope_count)
{
  std::vector<double> slopes(slope_count);
  for (std::size_t b = 0; b < blocks.count(); ++b)
    std::fill(slopes.begin() + static_cast<std::ptrdiff_t>(blocks.start[b]),
              slopes.begin() + static_cast<std::ptrdiff_t>(blocks.start[b + 1]),
              values[b]);
  return slopes;
}

BlockModel
block_model(const SortedSample& sample,
            const SlopeBlocks& blocks,
            std::span<const double> block_values)
{
  std::size_t n = sample.size();
  std::size_t m = n - 1;
  std::size_t nb = blocks.count();
  if (block_values.size() != nb || blocks.start.back() != m)
    throw Error(ErrorKind::length_mismatch, "block layout does not match sample");
  std::vector<double> slopes = expand_blocks(blocks, block_values, m);

  // zero-intercept log-density at the knots, shifted by its maximum
  std::vector<double> theta(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    theta[i] = theta[i - 1] + sample.gap(i - 1) * slopes[i - 1];
  double top = *std::max_element(theta.begin(), theta.end());

  // Per block: W0 = sum m0, W1 = sum (p m0 + m1), W2 = sum (p^2 m0 + 2 p m1 + m2)
  // with m_r = int_0^dx u^r exp(theta(x_i + u)) du and p the block length to
  // the left of the segment.
  Eigen::VectorXd w0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nb));
  Eigen::VectorXd w1 = w0, w2 = w0, length = w0, linear = w0;
  CompensatedSum theta_sum;
  for (double t : theta)
    theta_sum += t;
  for (std::size_t b = 0; b < nb; ++b) {
    double p = 0.0;
    auto bi = static_cast<Eigen::Index>(b);
    for (std::size_t i = blocks.start[b]; i < blocks.start[b + 1]; ++i) {
      double dx = sample.gap(i);
      RhoValues r = scaled_rho_family(theta[i] - top, dx * slopes[i]);
      double m0 = r.rho * dx;
      double m1 = r.rho_prime * dx * dx;
      double m2 = r.rho_double * dx * dx * dx;
      w0[bi] += m0;
      w1[bi] += p * m0 + m1;
      w2[bi] += p * p * m0 + 2.0 * p * m1 + m2;
      linear[bi] += static_cast<double>(n - i - 1) * dx;
      p += dx;
    }
    length[bi] = p;
  }

  // suffix[b] = mass of all blocks strictly to the right of b
  Eigen::VectorXd suffix = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nb));
  double mass = w0.sum();
  {
    double acc = 0.0;
    for (std::size_t b = nb; b-- > 0;) {
      suffix[static_cast<Eigen::Index>(b)] = acc;
      acc += w0[static_cast<Eigen::Index>(b)];
    }
  }

  Eigen::VectorXd dmass = length.cwiseProduct(suffix) + w1;
  Eigen::MatrixXd d2mass(nb, nb);
  for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(nb); ++b) {
    d2mass(b, b) = length[b] * length[b] * suffix[b] + w2[b];
    for (Eigen::Index c = b + 1; c < static_cast<Eigen::Index>(nb); ++c) {
      double v = length[b] * length[c] * suffix[c] + length[b] * w1[c];
      d2mass(b, c) = v;
      d2mass(c, b) = v;
    }
  }

  double nd = static_cast<double>(n);
  BlockModel model;
  model.value = theta_sum.value() - nd * (top + std::log(mass)) - nd;
  Eigen::VectorXd score = dmass / mass;
  model.gradient = linear - nd * score;
  model.hessian = -nd * (d2mass / mass - score * score.transpose());
  return model;
}

namespace {

// Index of the slope after which block b should be split, or npos when no
// within-block prefix sum of the gradient exceeds the tolerance.
struct Split
{
  std::size_t block;
  std::size_t after;
  double excess;
};

std::optional<Split>
best_split(const SlopeBlocks& blocks, std::span<const double> gradient, double tolerance)
{
  std::optional<Split> best;
  for (std::size_t b = 0; b < blocks.count(); ++b) {
    CompensatedSum prefix;
    for (std::size_t k = blocks.start[b]; k + 1 < blocks.start[b + 1]; ++k) {
      prefix += gradient[k + 1];
      double p = prefix.value();
      if (p > tolerance && (!best || p > best->excess))
        best = Split{ b, k, p };
    }
  }
  return best;
}

} // namespace

BlockNewtonResult
block_newton_refine(const SortedSample& sample,
                    std::span<const double> start_slopes,
                    std::size_t max_steps,
                    std::size_t max_halvings,
                    double split_tolerance)
{
  std::size_t m = start_slopes.size();
  ObjectiveWorkspace ws(sample);

  SlopeBlocks blocks = blocks_of(start_slopes);
  std::vector<double> values(blocks.count());
  for (std::size_t b = 0; b < blocks.count(); ++b)
    values[b] = start_slopes[blocks.start[b]];

  BlockNewtonResult out;
  out.omega = restore_intercept(expand_blocks(blocks, values, m), sample);
  out.phi = ws.phi_extended(out.omega);

  bool just_split = false;
  while (out.newton_steps < max_steps) {
    std::size_t nb = blocks.count();
    BlockModel model = block_model(sample, blocks, values);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-model.hessian);
    Eigen::VectorXd delta = ldlt.solve(model.gradient);
    bool moved = false;

    if (ldlt.info() == Eigen::Success && delta.allFinite()) {
      // largest fraction that keeps block values nonincreasing
      double limit = 1.0;
      std::size_t blocking = nb;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        double closing = delta[static_cast<Eigen::Index>(b + 1)] -
                         delta[static_cast<Eigen::Index>(b)];
        if (closing > 0.0) {
          double reach = (values[b] - values[b + 1]) / closing;
          if (reach < limit) {
            limit = reach;
            blocking = b;
          }
        }
      }
      auto step_to = [&](double fraction) {
        std::vector<double> trial(nb);
        for (std::size_t b = 0; b < nb; ++b)
          trial[b] = values[b] + fraction * delta[static_cast<Eigen::Index>(b)];
        for (std::size_t b = 1; b < nb; ++b)
          trial[b] = std::min(trial[b], trial[b - 1]);
        return trial;
      };
      auto accept = [&](std::vector<double> trial, long double floor) {
        OmegaVector omega = restore_intercept(expand_blocks(blocks, trial, m), sample);
        long double value = ws.phi_extended(omega);
        if (!(value > floor))
          return false;
        out.phi = value;
        out.omega = std::move(omega);
        values = std::move(trial);
        return true;
      };

      if (blocking < nb) {
        // Step exactly onto the first collision. Along an ascent direction
        // this cannot lower phi, so only rounding noise is tolerated.
        std::vector<double> trial = step_to(limit);
        trial[blocking + 1] = trial[blocking];
        for (std::size_t b = blocking + 2; b < nb; ++b)
          trial[b] = std::min(trial[b], trial[b - 1]);
        long double noise = 64.0L * std::numeric_limits<long double>::epsilon() *
                            (1.0L + std::fabs(out.phi));
        moved = accept(std::move(trial), out.phi - noise);
      }
      double fraction = limit;
      for (std::size_t h = 0; !moved && h <= max_halvings && fraction > 0.0;
           ++h, fraction *= 0.5)
        moved = accept(step_to(fraction), out.phi);
      if (!moved && blocking == nb) {
        // Near the optimum the gain of a full step drops below what phi can
        // resolve; take it anyway if it shrinks the gradient.
        std::vector<double> trial = step_to(1.0);
        long double noise = 64.0L * std::numeric_limits<long double>::epsilon() *
                            (1.0L + std::fabs(out.phi));
        if (block_model(sample, blocks, trial).gradient.norm() <
            0.5 * model.gradient.norm())
          moved = accept(std::move(trial), out.phi - noise);
      }
      ++out.newton_steps;
    }

    if (moved) {
      just_split = false;
      // merge blocks that met
      SlopeBlocks merged;
      std::vector<double> merged_values;
      merged.start.push_back(0);
      merged_values.push_back(values[0]);
      for (std::size_t b = 1; b < nb; ++b) {
        if (values[b] >= merged_values.back()) {
          continue;
        }
        merged.start.push_back(blocks.start[b]);
        merged_values.push_back(values[b]);
      }
      merged.start.push_back(m);
      blocks = std::move(merged);
      values = std::move(merged_values);
      continue;
    }

    // Values are stationary for this structure; look for a block to split.
    if (just_split)
      break;
    const auto& ev = ws.evaluate(out.omega);
    if (ev.overflow)
      break;
    auto split = best_split(blocks, ev.gradient, split_tolerance);
    if (!split) {
      out.stationary = true;
      break;
    }
    blocks.start.insert(blocks.start.begin() + static_cast<std::ptrdiff_t>(split->block + 1),
                        split->after + 1);
    values.insert(values.begin() + static_cast<std::ptrdiff_t>(split->block + 1),
                  values[split->block]);
    just_split = true;
  }
  return out;
}

} // namespace logcave
