#include "logcave/objective.hpp"

#include "logcave/compensated_sum.hpp"
#include "logcave/error.hpp"
#include "logcave/rho.hpp"

#include <algorithm>
#include <cmath>

namespace logcave {

namespace {

void
check_lengths(const OmegaVector& omega, const SortedSample& sample)
{
  if (omega.slopes.size() + 1 != sample.size()) {
    throw Error(ErrorKind::length_mismatch,
                "omega has " + std::to_string(omega.slopes.size()) +
                  " slopes, sample needs " + std::to_string(sample.size() - 1));
  }
}

} // namespace

ObjectiveWorkspace::ObjectiveWorkspace(const SortedSample& sample)
  : sample_(&sample)
  , theta_(sample.size())
  , segment_mass_(sample.size() - 1)
  , terms_(sample.size() - 1)
{}

bool
ObjectiveWorkspace::fill_theta(const OmegaVector& omega)
{
  check_lengths(omega, *sample_);
  std::size_t n = sample_->size();
  theta_[0] = omega.intercept;
  bool ok = std::isfinite(theta_[0]) && theta_[0] <= theta_overflow_cap;
  for (std::size_t i = 1; i < n; ++i) {
    theta_[i] = theta_[i - 1] + sample_->gap(i - 1) * omega.slopes[i - 1];
    ok = ok && std::isfinite(theta_[i]) && theta_[i] <= theta_overflow_cap;
  }
  return ok;
}

double
ObjectiveWorkspace::phi(const OmegaVector& omega)
{
  return static_cast<double>(phi_extended(omega));
}

long double
ObjectiveWorkspace::phi_extended(const OmegaVector& omega)
{
  if (!fill_theta(omega))
    return -std::numeric_limits<long double>::infinity();

  // Accumulated in extended precision: near the optimum the line search
  // compares values that differ by far less than n * eps * |phi|.
  std::size_t n = sample_->size();
  long double theta = omega.intercept;
  long double theta_sum = theta;
  long double mass = 0.0L;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    long double dx = sample_->gap(i);
    long double t = dx * static_cast<long double>(omega.slopes[i]);
    mass += scaled_rho_extended(theta, t) * dx;
    theta += t;
    theta_sum += theta;
  }
  long double value = theta_sum - static_cast<long double>(n) * mass;
  if (!std::isfinite(value) || !std::isfinite(static_cast<double>(value)))
    return -std::numeric_limits<long double>::infinity();
  return value;
}

const ObjectiveEvaluation&
ObjectiveWorkspace::evaluate(const OmegaVector& omega)
{
  std::size_t n = sample_->size();
  eval_.gradient.assign(n, 0.0);
  eval_.curvature.assign(n - 1, 0.0);
  eval_.overflow = !fill_theta(omega);
  if (eval_.overflow) {
    eval_.phi = -std::numeric_limits<double>::infinity();
    return eval_;
  }

  double nd = static_cast<double>(n);
  CompensatedSum theta_sum;
  CompensatedSum mass;
  for (std::size_t i = 0; i < n; ++i)
    theta_sum += theta_[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double dx = sample_->gap(i);
    terms_[i] = scaled_rho_family(theta_[i], dx * omega.slopes[i]);
    segment_mass_[i] = terms_[i].rho * dx;
    mass += segment_mass_[i];
  }
  eval_.phi = theta_sum.value() - nd * mass.value();
  if (!std::isfinite(eval_.phi)) {
    eval_.overflow = true;
    eval_.phi = -std::numeric_limits<double>::infinity();
    return eval_;
  }
  eval_.gradient[0] = nd - nd * mass.value();

  // Walk right to left so that `right_mass` holds the mass of all segments
  // strictly to the right of segment i.
  CompensatedSum right_mass;
  for (std::size_t k = n - 1; k-- > 0;) {
    double dx = sample_->gap(k);
    double r = right_mass.value();
    double knots_right = static_cast<double>(n - k - 1);
    eval_.gradient[k + 1] =
      knots_right * dx - nd * dx * r - nd * terms_[k].rho_prime * dx * dx;
    eval_.curvature[k] = nd * (dx * dx * r + terms_[k].rho_double * dx * dx * dx);
    right_mass += segment_mass_[k];
  }
  return eval_;
}

double
phi(const OmegaVector& omega, const SortedSample& sample)
{
  ObjectiveWorkspace ws(sample);
  return ws.phi(omega);
}

std::vector<double>
grad_phi(const OmegaVector& omega, const SortedSample& sample)
{
  ObjectiveWorkspace ws(sample);
  const auto& ev = ws.evaluate(omega);
  if (ev.overflow)
    throw Error(ErrorKind::step_failure, "log-density overflow in gradient");
  return ev.gradient;
}

void
apply_curvature_floor(std::span<double> curvature, double floor_factor)
{
  if (floor_factor <= 0.0 || curvature.empty())
    return;
  double largest = *std::max_element(curvature.begin(), curvature.end());
  double floor = floor_factor * std::max(1.0, largest);
  for (double& d : curvature)
    d = std::max(d, floor);
}

std::vector<double>
diag_curvature(const OmegaVector& omega,
               const SortedSample& sample,
               double floor_factor)
{
  ObjectiveWorkspace ws(sample);
  const auto& ev = ws.evaluate(omega);
  if (ev.overflow)
    throw Error(ErrorKind::step_failure, "log-density overflow in curvature");
  std::vector<double> d = ev.curvature;
  apply_curvature_floor(d, floor_factor);
  return d;
}

double
omega1_from_constraint(std::span<const double> slopes,
                       const SortedSample& sample)
{
  std::size_t n = sample.size();
  if (slopes.size() + 1 != n) {
    throw Error(ErrorKind::length_mismatch,
                "got " + std::to_string(slopes.size()) + " slopes, sample needs " +
                  std::to_string(n - 1));
  }
  // Partial sums with a zero intercept, shifted by their maximum so the
  // exponentials stay in range.
  std::vector<double> partial(n);
  partial[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    partial[i] = partial[i - 1] + sample.gap(i - 1) * slopes[i - 1];
  double top = *std::max_element(partial.begin(), partial.end());

  CompensatedSum mass;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double dx = sample.gap(i);
    mass += scaled_rho(partial[i] - top, dx * slopes[i]) * dx;
  }
  // + 0.0 keeps an exact zero from printing as -0
  return -top - std::log(mass.value()) + 0.0;
}

OmegaVector
restore_intercept(std::vector<double> slopes, const SortedSample& sample)
{
  OmegaVector omega;
  omega.intercept = omega1_from_constraint(slopes, sample);
  omega.slopes = std::move(slopes);
  return omega;
}

} // namespace logcave
