#include "logcave/rho.hpp"

#include <array>
#include <cmath>

namespace logcave {

namespace {

constexpr int series_terms = 26;

constexpr double
factorial(int k)
{
  double f = 1.0;
  for (int i = 2; i <= k; ++i)
    f *= i;
  return f;
}

// rho   = sum_m t^m / (m+1)!
// rho'  = sum_m (m+1) t^m / (m+2)!
// rho'' = sum_m (m+1)(m+2) t^m / (m+3)!
struct SeriesCoefficients
{
  std::array<double, series_terms> rho{};
  std::array<double, series_terms> rho_prime{};
  std::array<double, series_terms> rho_double{};
};

constexpr SeriesCoefficients
make_coefficients()
{
  SeriesCoefficients c;
  for (int m = 0; m < series_terms; ++m) {
    c.rho[m] = 1.0 / factorial(m + 1);
    c.rho_prime[m] = (m + 1.0) / factorial(m + 2);
    c.rho_double[m] = (m + 1.0) * (m + 2.0) / factorial(m + 3);
  }
  return c;
}

constexpr SeriesCoefficients coefficients = make_coefficients();

template<class Real>
Real
horner(const std::array<double, series_terms>& c, Real t)
{
  Real acc = c[series_terms - 1];
  for (int m = series_terms - 2; m >= 0; --m)
    acc = acc * t + c[m];
  return acc;
}

} // namespace

RhoValues
rho_family(double t)
{
  return scaled_rho_family(0.0, t);
}

RhoValues
rho_series(double t)
{
  return { horner(coefficients.rho, t),
           horner(coefficients.rho_prime, t),
           horner(coefficients.rho_double, t) };
}

RhoValues
rho_closed_form(double t)
{
  double e = std::exp(t);
  double t2 = t * t;
  return { (e - 1.0) / t, ((t - 1.0) * e + 1.0) / t2, ((t2 - 2.0 * t + 2.0) * e - 2.0) / (t2 * t) };
}

RhoValues
scaled_rho_family(double a, double t)
{
  if (std::fabs(t) <= rho_series_threshold) {
    double scale = std::exp(a);
    return { scale * horner(coefficients.rho, t),
             scale * horner(coefficients.rho_prime, t),
             scale * horner(coefficients.rho_double, t) };
  }
  double e0 = std::exp(a);
  double e1 = std::exp(a + t);
  double t2 = t * t;
  return { (e1 - e0) / t,
           ((t - 1.0) * e1 + e0) / t2,
           ((t2 - 2.0 * t + 2.0) * e1 - 2.0 * e0) / (t2 * t) };
}

double
scaled_rho(double a, double t)
{
  if (std::fabs(t) <= rho_series_threshold)
    return std::exp(a) * horner(coefficients.rho, t);
  return (std::exp(a + t) - std::exp(a)) / t;
}

long double
scaled_rho_extended(long double a, long double t)
{
  if (std::fabs(t) <= rho_series_threshold)
    return std::exp(a) * horner(coefficients.rho, t);
  return (std::exp(a + t) - std::exp(a)) / t;
}

} // namespace logcave
