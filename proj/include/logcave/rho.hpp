#pragma once

namespace logcave {

//! rho(t) = (e^t - 1)/t and its first two derivatives.
struct RhoValues
{
  double rho;
  double rho_prime;
  double rho_double;
};

//! Below this |t| the Taylor series is used instead of the closed forms.
//! The closed form of rho'' loses about log10(1/t^2) digits to cancellation,
//! so the switch happens well away from zero and the series carries enough
//! terms to stay at double rounding on the whole |t| <= 1 range.
inline constexpr double rho_series_threshold = 1.0;

RhoValues rho_family(double t);

//! The two branches of rho_family, exposed for continuity checks.
RhoValues rho_series(double t);
RhoValues rho_closed_form(double t);

//! exp(a) * rho(t), exp(a) * rho'(t), exp(a) * rho''(t), evaluated without
//! forming exp(t) on its own so that a very negative `a` paired with a large
//! `t` does not overflow. `a + t` must stay below the overflow limit of exp.
RhoValues scaled_rho_family(double a, double t);

//! exp(a) * rho(t) only; cheaper than the full family.
double scaled_rho(double a, double t);

//! scaled_rho in extended precision, for objective values that have to
//! resolve very small ascent steps.
long double scaled_rho_extended(long double a, long double t);

} // namespace logcave
