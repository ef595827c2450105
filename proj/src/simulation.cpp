#include "logcave/simulation.hpp"

#include "logcave/compensated_sum.hpp"
#include "logcave/error.hpp"
#include "logcave/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace logcave {

std::string_view
ReferenceDensity::name() const
{
  switch (kind) {
    case DensityKind::normal:
      return "normal";
    case DensityKind::double_exponential:
      return "double-exponential";
    case DensityKind::gamma:
      return "gamma";
    case DensityKind::beta:
      return "beta";
    case DensityKind::weibull:
      return "weibull";
  }
  return "unknown";
}

double
ReferenceDensity::pdf(double x) const
{
  switch (kind) {
    case DensityKind::normal:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case DensityKind::double_exponential:
      return 0.5 * std::exp(-std::fabs(x));
    case DensityKind::gamma:
      return x <= 0.0 ? 0.0 : 0.5 * x * x * std::exp(-x);
    case DensityKind::beta:
      return (x <= 0.0 || x >= 1.0) ? 0.0 : 12.0 * x * x * (1.0 - x);
    case DensityKind::weibull:
      return x <= 0.0 ? 0.0 : 3.0 * x * x * std::exp(-x * x * x);
  }
  return 0.0;
}

double
ReferenceDensity::support_min() const
{
  switch (kind) {
    case DensityKind::normal:
      return -40.0;
    case DensityKind::double_exponential:
      return -60.0;
    case DensityKind::gamma:
    case DensityKind::beta:
    case DensityKind::weibull:
      return 0.0;
  }
  return 0.0;
}

double
ReferenceDensity::support_max() const
{
  switch (kind) {
    case DensityKind::normal:
      return 40.0;
    case DensityKind::double_exponential:
      return 60.0;
    case DensityKind::gamma:
      return 100.0;
    case DensityKind::beta:
      return 1.0;
    case DensityKind::weibull:
      return 10.0;
  }
  return 0.0;
}

std::vector<double>
ReferenceDensity::breakpoints() const
{
  if (kind == DensityKind::double_exponential)
    return { 0.0 };
  return {};
}

std::vector<double>
ReferenceDensity::sample(Rng& rng, std::size_t n) const
{
  std::vector<double> out(n);
  for (auto& x : out) {
    switch (kind) {
      case DensityKind::normal:
        x = rng.normal();
        break;
      case DensityKind::double_exponential: {
        double e = rng.exponential();
        x = rng.uniform() < 0.5 ? -e : e;
        break;
      }
      case DensityKind::gamma:
        x = rng.exponential() + rng.exponential() + rng.exponential();
        break;
      case DensityKind::beta: {
        double g3 = rng.exponential() + rng.exponential() + rng.exponential();
        double g2 = rng.exponential() + rng.exponential();
        x = g3 / (g3 + g2);
        break;
      }
      case DensityKind::weibull:
        x = std::cbrt(rng.exponential());
        break;
    }
  }
  return out;
}

ReferenceDensity
parse_density(std::string_view name)
{
  if (name == "normal")
    return { DensityKind::normal };
  if (name == "double-exponential" || name == "double_exponential" ||
      name == "laplace")
    return { DensityKind::double_exponential };
  if (name == "gamma")
    return { DensityKind::gamma };
  if (name == "beta")
    return { DensityKind::beta };
  if (name == "weibull")
    return { DensityKind::weibull };
  throw Error(ErrorKind::parse_error,
              "unknown density '" + std::string(name) +
                "' (expected normal, double-exponential, gamma, beta, weibull)");
}

const std::vector<ReferenceDensity>&
all_reference_densities()
{
  static const std::vector<ReferenceDensity> all = {
    { DensityKind::normal },
    { DensityKind::double_exponential },
    { DensityKind::gamma },
    { DensityKind::beta },
    { DensityKind::weibull },
  };
  return all;
}

namespace {

// Integrates f over [lo, hi] split at the given breakpoints, sharing the
// tolerance in proportion to piece length.
double
integrate_pieces(const std::function<double(double)>& f,
                 double lo,
                 double hi,
                 std::span<const double> breakpoints,
                 double tolerance)
{
  if (!(hi > lo))
    return 0.0;
  std::vector<double> cuts{ lo };
  for (double b : breakpoints) {
    if (b > lo && b < hi)
      cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  CompensatedSum total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double share = tolerance * (cuts[i + 1] - cuts[i]) / (hi - lo);
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], share);
  }
  return total.value();
}

double
distance_from_affinity(double affinity)
{
  double h2 = 2.0 * (1.0 - affinity);
  return std::clamp(std::sqrt(std::max(h2, 0.0)), 0.0, std::sqrt(2.0));
}

} // namespace

double
hellinger_pdfs(const std::function<double(double)>& f,
               const std::function<double(double)>& g,
               double lo,
               double hi,
               std::span<const double> breakpoints)
{
  auto root = [&](double x) { return std::sqrt(f(x) * g(x)); };
  double affinity = integrate_pieces(root, lo, hi, breakpoints, hellinger_tolerance);
  return distance_from_affinity(affinity);
}

double
hellinger(const LogConcaveFit& fit, const ReferenceDensity& density)
{
  double lo = std::max(fit.support_min(), density.support_min());
  double hi = std::min(fit.support_max(), density.support_max());
  if (!(hi > lo))
    return std::sqrt(2.0);

  const auto& sample = fit.sample();
  auto theta = fit.theta();
  std::vector<double> breaks = density.breakpoints();
  double total_length = hi - lo;

  CompensatedSum affinity;
  for (std::size_t i = 0; i + 1 < sample.size(); ++i) {
    double a = std::max(sample.knot(i), lo);
    double b = std::min(sample.knot(i + 1), hi);
    if (!(b > a))
      continue;
    double x0 = sample.knot(i);
    double slope = (theta[i + 1] - theta[i]) / sample.gap(i);
    double th0 = theta[i];
    // sqrt of the fit is exp of half its (linear) log-density on this piece
    auto root = [&](double x) {
      return std::exp(0.5 * (th0 + slope * (x - x0))) * std::sqrt(density.pdf(x));
    };
    double share = hellinger_tolerance * (b - a) / total_length;
    affinity += integrate_pieces(root, a, b, breaks, share);
  }
  return distance_from_affinity(affinity.value());
}

double
reference_mass(const ReferenceDensity& density)
{
  std::vector<double> breaks = density.breakpoints();
  auto f = [&](double x) { return density.pdf(x); };
  return integrate_pieces(f, density.support_min(), density.support_max(), breaks, 1e-11);
}

void
check_reference_densities()
{
  for (const auto& d : all_reference_densities()) {
    double mass = reference_mass(d);
    if (std::fabs(mass - 1.0) > 1e-8) {
      throw std::logic_error("reference density " + std::string(d.name()) +
                             " integrates to " + std::to_string(mass));
    }
  }
}

std::uint64_t
replication_seed(std::uint64_t master,
                 DensityKind density,
                 std::size_t n,
                 std::size_t replication)
{
  std::uint64_t h = mix_seed(master);
  h = mix_seed(h ^ static_cast<std::uint64_t>(density));
  h = mix_seed(h ^ static_cast<std::uint64_t>(n));
  h = mix_seed(h ^ static_cast<std::uint64_t>(replication));
  return h;
}

namespace {

struct Replicate
{
  double distance = 0.0;
  bool converged = false;
  bool failed = false;
};

Replicate
run_replication(const ReferenceDensity& density,
                std::size_t n,
                std::size_t m,
                const SimulationSpec& spec)
{
  Replicate out;
  try {
    Rng rng(replication_seed(spec.master_seed, density.kind, n, m));
    std::vector<double> draws = density.sample(rng, n);
    SortedSample sample = SortedSample::from_raw(draws, TieHandling::jitter);
    FitResult result = fit(sample, spec.solver);
    out.distance = hellinger(result.fit, density);
    out.converged = result.report.converged;
    if (spec.on_fit)
      spec.on_fit(density.kind, n, m, result);
  } catch (const Error&) {
    out.failed = true;
  }
  return out;
}

} // namespace

SimulationTable
run_monte_carlo(const SimulationSpec& spec)
{
  if (spec.replications < 1)
    throw Error(ErrorKind::bad_count, "need at least one replication");
  for (std::size_t n : spec.sizes) {
    if (n < 2)
      throw Error(ErrorKind::too_few_points, "sample sizes must be at least 2");
  }
  check_reference_densities();

  std::vector<std::size_t> sizes = spec.sizes;
  std::sort(sizes.begin(), sizes.end());

  struct Job
  {
    std::size_t density;
    std::size_t size;
    std::size_t replication;
  };
  std::vector<Job> jobs;
  for (std::size_t d = 0; d < spec.densities.size(); ++d)
    for (std::size_t s = 0; s < sizes.size(); ++s)
      for (std::size_t m = 0; m < spec.replications; ++m)
        jobs.push_back({ d, s, m });

  std::vector<Replicate> results(jobs.size());
  std::atomic<std::size_t> next{ 0 };
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      results[j] = run_replication(spec.densities[job.density], sizes[job.size],
                                   job.replication, spec);
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }

  SimulationTable table;
  std::size_t j = 0;
  for (std::size_t d = 0; d < spec.densities.size(); ++d) {
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      SimulationRow row{ spec.densities[d], sizes[s], spec.replications, 0.0, 0.0, 0, {} };
      CompensatedSum sum;
      for (std::size_t m = 0; m < spec.replications; ++m, ++j) {
        const Replicate& r = results[j];
        if (r.failed || !r.converged)
          ++row.failures;
        if (r.failed)
          continue;
        row.distances.push_back(r.distance);
        sum += r.distance;
      }
      std::size_t used = row.distances.size();
      if (used > 0) {
        row.mean_hellinger = sum.value() / static_cast<double>(used);
        CompensatedSum squares;
        for (double h : row.distances)
          squares += (h - row.mean_hellinger) * (h - row.mean_hellinger);
        row.sd_hellinger =
          used > 1 ? std::sqrt(squares.value() / static_cast<double>(used - 1)) : 0.0;
      } else {
        row.mean_hellinger = std::nan("");
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

} // namespace logcave
