#include "logcave/solver.hpp"

#include "logcave/block_newton.hpp"
#include "logcave/compensated_sum.hpp"
#include "logcave/error.hpp"
#include "logcave/majorant.hpp"

#include <algorithm>
#include <cmath>

namespace logcave {

namespace {

// Slopes closer than this (relative) are treated as one block by the KKT
// check.
constexpr double block_tolerance = 1e-12;

bool
same_block(double a, double b)
{
  return std::fabs(a - b) <= block_tolerance * std::max({ 1.0, std::fabs(a), std::fabs(b) });
}

struct RunOutcome
{
  IcmState state;
  IcmReport report;
};

RunOutcome
run_icm(const SortedSample& sample, OmegaVector start, const IcmConfig& config)
{
  ObjectiveWorkspace ws(sample);
  RunOutcome out;
  out.state.phi = ws.phi_extended(start);
  out.state.omega = std::move(start);
  out.report.phi_trace.push_back(out.state.phi);

  while (out.state.iteration < config.max_iterations) {
    OmegaVector candidate;
    try {
      candidate = icm_candidate(out.state, sample, config);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::step_failure)
        throw;
      break;
    }
    auto step = line_search(out.state, candidate, config, sample);
    if (!step)
      break; // no representable ascent left along the surrogate direction
    long double previous = out.state.phi;
    out.state.omega = std::move(step->omega);
    out.state.phi = step->phi;
    ++out.state.iteration;
    out.report.phi_trace.push_back(step->phi);
    out.report.step_sizes.push_back(step->step);
    if (std::fabs(step->phi - previous) <=
        config.phi_tolerance * (1.0L + std::fabs(previous)))
      break;
  }
  out.report.iterations = out.state.iteration;
  return out;
}

// Newton refinement seeded with the block structure of the next surrogate
// solution; replaces the iterate only if it strictly increases phi.
void
refine(const SortedSample& sample, const IcmConfig& config, RunOutcome& run)
{
  std::vector<double> seed;
  try {
    seed = icm_candidate(run.state, sample, config).slopes;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::step_failure)
      throw;
    seed = run.state.omega.slopes;
  }
  if (blocks_of(seed).count() > config.newton_max_blocks)
    seed.assign(seed.size(), 0.0);

  BlockNewtonResult refined =
    block_newton_refine(sample, seed, config.newton_steps, config.max_halvings,
                        0.1 * config.kkt_tolerance);
  if (refined.phi > run.state.phi) {
    run.state.omega = std::move(refined.omega);
    run.state.phi = refined.phi;
    run.report.phi_trace.push_back(run.state.phi);
    run.report.newton_steps = refined.newton_steps;
  }
}

} // namespace

OmegaVector
initialize_normal(const SortedSample& sample)
{
  auto x = sample.knots();
  double n = static_cast<double>(x.size());
  CompensatedSum sum;
  for (double v : x)
    sum += v;
  double mean = sum.value() / n;
  CompensatedSum squares;
  for (double v : x)
    squares += (v - mean) * (v - mean);
  double variance = squares.value() / (n - 1.0);
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw Error(ErrorKind::degenerate_variance, "sample variance is not positive");

  std::vector<double> slopes(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    // chord slope of -(x - mean)^2 / (2 var) between consecutive knots
    slopes[i] = -((x[i] + x[i + 1]) * 0.5 - mean) / variance;
  }
  // the chord form is monotone in exact arithmetic; remove rounding noise
  for (std::size_t i = 1; i < slopes.size(); ++i)
    slopes[i] = std::min(slopes[i], slopes[i - 1]);
  return restore_intercept(std::move(slopes), sample);
}

OmegaVector
initialize_uniform(const SortedSample& sample)
{
  return restore_intercept(std::vector<double>(sample.size() - 1, 0.0), sample);
}

OmegaVector
icm_candidate(const IcmState& state,
              const SortedSample& sample,
              const IcmConfig& config)
{
  ObjectiveWorkspace ws(sample);
  const auto& ev = ws.evaluate(state.omega);
  if (ev.overflow)
    throw Error(ErrorKind::step_failure, "log-density overflow at current iterate");

  std::size_t m = state.omega.slopes.size();
  std::vector<double> d = ev.curvature;
  apply_curvature_floor(d, config.curvature_floor);
  std::vector<double> v(m);
  for (std::size_t k = 0; k < m; ++k)
    v[k] = d[k] * state.omega.slopes[k] + ev.gradient[k + 1];

  std::vector<double> slopes = concave_majorant_slopes(d, v);
  for (double s : slopes) {
    if (!std::isfinite(s))
      throw Error(ErrorKind::step_failure, "non-finite surrogate slope");
  }
  return restore_intercept(std::move(slopes), sample);
}

std::optional<LineSearchStep>
line_search(const IcmState& state,
            const OmegaVector& candidate,
            const IcmConfig& config,
            const SortedSample& sample)
{
  ObjectiveWorkspace ws(sample);
  const auto& from = state.omega.slopes;
  const auto& to = candidate.slopes;
  if (from.size() != to.size())
    throw Error(ErrorKind::length_mismatch, "candidate and state differ in length");

  long double current = ws.phi_extended(state.omega);
  double step = 1.0;
  for (std::size_t h = 0; h <= config.max_halvings; ++h, step *= 0.5) {
    OmegaVector trial;
    if (h == 0) {
      trial = candidate;
    } else {
      std::vector<double> slopes(from.size());
      for (std::size_t k = 0; k < from.size(); ++k)
        slopes[k] = from[k] + step * (to[k] - from[k]);
      trial = restore_intercept(std::move(slopes), sample);
    }
    long double value = ws.phi_extended(trial);
    if (value > current)
      return LineSearchStep{ std::move(trial), value, step };
  }
  return std::nullopt;
}

FitResult
fit(const SortedSample& sample, const IcmConfig& config)
{
  RunOutcome run = run_icm(sample, initialize_normal(sample), config);
  if (run.state.iteration == 0) {
    RunOutcome uniform = run_icm(sample, initialize_uniform(sample), config);
    uniform.report.uniform_start = true;
    if (uniform.state.phi > run.state.phi)
      run = std::move(uniform);
  }
  if (config.block_newton)
    refine(sample, config, run);

  run.report.kkt_residual = kkt_residual(run.state.omega, sample);
  run.report.converged = run.report.kkt_residual <= config.kkt_tolerance;
  ThetaVector theta = theta_from_omega(run.state.omega, sample);
  LogConcaveFit result(sample, std::move(theta));
  return FitResult{ std::move(result), std::move(run.state.omega), std::move(run.report) };
}

double
kkt_residual(std::span<const double> slopes, std::span<const double> gradient)
{
  if (gradient.size() != slopes.size() + 1)
    throw Error(ErrorKind::length_mismatch, "gradient and slopes differ in length");
  for (std::size_t k = 1; k < slopes.size(); ++k) {
    if (slopes[k] > slopes[k - 1] && !same_block(slopes[k], slopes[k - 1]))
      throw Error(ErrorKind::infeasible_point, "slopes are not nonincreasing");
  }
  double residual = std::fabs(gradient[0]);
  CompensatedSum prefix;
  for (std::size_t k = 0; k < slopes.size(); ++k) {
    prefix += gradient[k + 1];
    bool block_end = k + 1 == slopes.size() || !same_block(slopes[k], slopes[k + 1]);
    double p = prefix.value();
    // at a block end the prefix equals the sum of completed blocks, which
    // must vanish; inside a block only upward moves of the prefix are allowed
    residual = std::max(residual, block_end ? std::fabs(p) : std::max(p, 0.0));
  }
  return residual;
}

double
kkt_residual(const OmegaVector& omega, const SortedSample& sample)
{
  if (!slopes_nonincreasing(omega.slopes) &&
      !slopes_nonincreasing(omega.slopes, block_tolerance * (1.0 + std::fabs(omega.slopes.front()))))
    throw Error(ErrorKind::infeasible_point, "slopes are not nonincreasing");
  ObjectiveWorkspace ws(sample);
  const auto& ev = ws.evaluate(omega);
  if (ev.overflow)
    throw Error(ErrorKind::infeasible_point, "log-density overflow");
  return kkt_residual(omega.slopes, ev.gradient);
}

} // namespace logcave
