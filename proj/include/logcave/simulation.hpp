#pragma once

#include "logcave/fit.hpp"
#include "logcave/rng.hpp"
#include "logcave/solver.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logcave {

enum class DensityKind
{
  normal,             // N(0, 1)
  double_exponential, // Laplace(0, 1)
  gamma,              // shape 3, scale 1
  beta,               // shapes 3, 2
  weibull,            // shape 3, scale 1
};

struct ReferenceDensity
{
  DensityKind kind;

  std::string_view name() const;
  double pdf(double x) const;
  //! Interval outside which the pdf is zero or below 1e-300 relative mass.
  double support_min() const;
  double support_max() const;
  //! Points where the pdf is not smooth; quadrature splits there.
  std::vector<double> breakpoints() const;
  std::vector<double> sample(Rng& rng, std::size_t n) const;
};

//! Parses "normal", "double-exponential" (or "laplace"), "gamma", "beta",
//! "weibull". Throws Error(parse_error) for anything else.
ReferenceDensity parse_density(std::string_view name);

const std::vector<ReferenceDensity>& all_reference_densities();

inline double
pdf_true(const ReferenceDensity& density, double x)
{
  return density.pdf(x);
}

inline std::vector<double>
sample_true(const ReferenceDensity& density, Rng& rng, std::size_t n)
{
  return density.sample(rng, n);
}

inline constexpr double hellinger_tolerance = 1e-9;

//! Hellinger distance sqrt(2 (1 - integral sqrt(g f))) between a fitted
//! density and a reference density, clamped to [0, sqrt 2].
double hellinger(const LogConcaveFit& fit, const ReferenceDensity& density);

//! Same distance between two arbitrary pdfs integrated over [lo, hi], split
//! at `breakpoints`.
double hellinger_pdfs(const std::function<double(double)>& f,
                      const std::function<double(double)>& g,
                      double lo,
                      double hi,
                      std::span<const double> breakpoints = {});

//! Integral of the reference pdf over its support, by adaptive quadrature.
double reference_mass(const ReferenceDensity& density);

//! Throws if any reference pdf integrates to something other than 1 within
//! 1e-8.
void check_reference_densities();

struct SimulationSpec
{
  std::vector<ReferenceDensity> densities;
  std::vector<std::size_t> sizes;
  std::size_t replications = 1;
  std::uint64_t master_seed = 0;
  IcmConfig solver;
  //! 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  //! Optional; sees every successful fit. Called from worker threads.
  std::function<void(DensityKind, std::size_t n, std::size_t replication, const FitResult&)>
    on_fit;
};

struct SimulationRow
{
  ReferenceDensity density;
  std::size_t n;
  std::size_t replications;
  double mean_hellinger;
  double sd_hellinger;
  std::size_t failures;
  //! Per-replication distances, in replication order.
  std::vector<double> distances;
};

struct SimulationTable
{
  std::vector<SimulationRow> rows;
};

//! Child seed for one replication; depends only on its arguments.
std::uint64_t replication_seed(std::uint64_t master,
                               DensityKind density,
                               std::size_t n,
                               std::size_t replication);

//! Rows come out in the order of spec.densities, sizes ascending.
SimulationTable run_monte_carlo(const SimulationSpec& spec);

} // namespace logcave
