#pragma once

// Independent reference computations for the tests. None of these call into
// the library's numerics; they work from first principles in quad precision
// or by brute force.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using quad = boost::multiprecision::float128;
using big = boost::multiprecision::cpp_bin_float_100;

struct Rho
{
  double rho;
  double rho_prime;
  double rho_double;
};

// Closed forms in 100-digit arithmetic; cancellation near zero costs at most
// a few dozen digits, which this precision absorbs.
inline Rho
rho_exact(double t)
{
  big x = t;
  if (t == 0.0)
    return { 1.0, 0.5, 1.0 / 3.0 };
  big e = exp(x);
  big r = (e - 1) / x;
  big r1 = ((x - 1) * e + 1) / (x * x);
  big r2 = ((x * x - 2 * x + 2) * e - 2) / (x * x * x);
  return { static_cast<double>(r), static_cast<double>(r1), static_cast<double>(r2) };
}

// Integral of exp over the chord from (0, a) to (dx, b).
template<class Real>
Real
segment_mass(Real a, Real b, Real dx)
{
  using std::exp;
  using boost::multiprecision::exp;
  if (a == b)
    return exp(a) * dx;
  return (exp(b) - exp(a)) / (b - a) * dx;
}

// Lagrangian objective with multiplier n, from the theta form:
// sum theta - n * integral of exp(piecewise linear theta).
inline quad
phi_quad(const std::vector<quad>& omega, const std::vector<double>& knots)
{
  std::size_t n = knots.size();
  quad theta = omega[0];
  quad sum = theta;
  quad mass = 0;
  for (std::size_t j = 1; j < n; ++j) {
    quad dx = quad(knots[j]) - quad(knots[j - 1]);
    quad next = theta + dx * omega[j];
    mass += segment_mass(theta, next, dx);
    sum += next;
    theta = next;
  }
  return sum - quad(n) * mass;
}

inline std::vector<quad>
to_quad(double omega1, const std::vector<double>& slopes)
{
  std::vector<quad> w{ quad(omega1) };
  for (double s : slopes)
    w.emplace_back(s);
  return w;
}

inline double
step_for(double v)
{
  return 1e-6 * std::max(1.0, std::fabs(v));
}

// Central differences of phi_quad; entry 0 is the intercept.
inline std::vector<double>
fd_gradient(double omega1, const std::vector<double>& slopes, const std::vector<double>& knots)
{
  std::vector<quad> w = to_quad(omega1, slopes);
  std::vector<double> g(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    quad h = step_for(static_cast<double>(w[k]));
    auto up = w, down = w;
    up[k] += h;
    down[k] -= h;
    g[k] = static_cast<double>((phi_quad(up, knots) - phi_quad(down, knots)) / (2 * h));
  }
  return g;
}

// Negated second central differences for the slopes.
inline std::vector<double>
fd_curvature(double omega1, const std::vector<double>& slopes, const std::vector<double>& knots)
{
  std::vector<quad> w = to_quad(omega1, slopes);
  quad mid = phi_quad(w, knots);
  std::vector<double> d(slopes.size());
  for (std::size_t k = 1; k < w.size(); ++k) {
    quad h = step_for(static_cast<double>(w[k]));
    auto up = w, down = w;
    up[k] += h;
    down[k] -= h;
    d[k - 1] = static_cast<double>(-(phi_quad(up, knots) - 2 * mid + phi_quad(down, knots)) / (h * h));
  }
  return d;
}

inline double
mass_quad(const std::vector<double>& theta, const std::vector<double>& knots)
{
  quad mass = 0;
  for (std::size_t j = 1; j < knots.size(); ++j)
    mass += segment_mass(quad(theta[j - 1]), quad(theta[j]), quad(knots[j]) - quad(knots[j - 1]));
  return static_cast<double>(mass);
}

// Profile log-likelihood of the slopes: theta_1 is chosen so the density
// integrates to one.
inline quad
profile_loglik(const std::vector<quad>& slopes, const std::vector<double>& knots)
{
  std::size_t n = knots.size();
  quad theta = 0, sum = 0, mass = 0;
  for (std::size_t j = 1; j < n; ++j) {
    quad dx = quad(knots[j]) - quad(knots[j - 1]);
    quad next = theta + dx * slopes[j - 1];
    mass += segment_mass(theta, next, dx);
    sum += next;
    theta = next;
  }
  return sum - quad(n) * log(mass);
}

// Weighted min-max formula for the left-hand slopes of the least concave
// majorant, evaluated literally in O(n^3).
inline std::vector<double>
min_max_slopes(const std::vector<double>& d, const std::vector<double>& v)
{
  std::size_t m = d.size();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    long double best = std::numeric_limits<long double>::infinity();
    for (std::size_t j = 0; j <= i; ++j) {
      long double worst = -std::numeric_limits<long double>::infinity();
      for (std::size_t k = i; k < m; ++k) {
        long double num = 0, den = 0;
        for (std::size_t h = j; h <= k; ++h) {
          num += v[h];
          den += d[h];
        }
        worst = std::max(worst, num / den);
      }
      best = std::min(best, worst);
    }
    out[i] = static_cast<double>(best);
  }
  return out;
}

// Largest profile log-likelihood for n = 3 by repeated grid refinement over
// the two slopes on the cone s1 >= s2.
inline double
grid_search_n3(const std::vector<double>& knots)
{
  double span = knots.back() - knots.front();
  double gap = std::min(knots[1] - knots[0], knots[2] - knots[1]);
  double c1 = 0.0, c2 = 0.0, half = 50.0 / gap + 10.0 / span;
  quad best = -std::numeric_limits<double>::infinity();
  const int cells = 20;
  for (int round = 0; round < 45; ++round) {
    double b1 = c1, b2 = c2;
    for (int i = -cells; i <= cells; ++i) {
      for (int j = -cells; j <= cells; ++j) {
        double s1 = c1 + half * i / cells;
        double s2 = std::min(s1, c2 + half * j / cells);
        quad value = profile_loglik({ quad(s1), quad(s2) }, knots);
        if (value > best) {
          best = value;
          b1 = s1;
          b2 = s2;
        }
      }
    }
    c1 = b1;
    c2 = b2;
    half *= 0.35;
  }
  return static_cast<double>(best);
}

// Euclidean projection of three values onto s1 >= s2 >= s3 by checking every
// way of pooling adjacent entries.
inline std::vector<double>
project_monotone3(const std::vector<double>& s)
{
  std::vector<std::vector<int>> layouts = { { 0, 1, 2 }, { 0, 0, 1 }, { 0, 1, 1 }, { 0, 0, 0 } };
  std::vector<double> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& layout : layouts) {
    std::vector<double> out(3);
    for (int g = 0; g < 3; ++g) {
      double sum = 0;
      int count = 0;
      for (int i = 0; i < 3; ++i) {
        if (layout[i] == g) {
          sum += s[i];
          ++count;
        }
      }
      for (int i = 0; i < 3; ++i) {
        if (layout[i] == g)
          out[i] = sum / count;
      }
    }
    if (!(out[0] >= out[1] && out[1] >= out[2]))
      continue;
    double dist = 0;
    for (int i = 0; i < 3; ++i)
      dist += (out[i] - s[i]) * (out[i] - s[i]);
    if (dist < best_dist) {
      best_dist = dist;
      best = out;
    }
  }
  return best;
}

// Largest profile log-likelihood for n = 4 by projected gradient ascent with
// backtracking, gradients by central differences in quad precision.
inline double
projected_gradient_n4(const std::vector<double>& knots)
{
  std::vector<double> s(3, 0.0);
  auto value = [&](const std::vector<double>& x) {
    return profile_loglik({ quad(x[0]), quad(x[1]), quad(x[2]) }, knots);
  };
  quad current = value(s);
  double step = 1e-2;
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> g(3);
    for (int k = 0; k < 3; ++k) {
      auto up = s, down = s;
      double h = 1e-7 * std::max(1.0, std::fabs(s[k]));
      up[k] += h;
      down[k] -= h;
      g[k] = static_cast<double>((value(up) - value(down)) / (2 * h));
    }
    bool moved = false;
    for (int tries = 0; tries < 60; ++tries) {
      std::vector<double> trial(3);
      for (int k = 0; k < 3; ++k)
        trial[k] = s[k] + step * g[k];
      trial = project_monotone3(trial);
      quad v = value(trial);
      if (v > current) {
        s = trial;
        current = v;
        moved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!moved)
      break;
  }
  return static_cast<double>(current);
}

inline double
integrate(const std::function<double(double)>& f, double a, double b)
{
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-10);
}

inline double
integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b)
{
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, 1e-12);
}

inline std::vector<double>
random_knots(std::mt19937_64& gen, std::size_t n, double scale = 1.0)
{
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> x;
  while (x.size() < n) {
    double v = normal(gen);
    if (std::find(x.begin(), x.end(), v) == x.end())
      x.push_back(v);
  }
  std::sort(x.begin(), x.end());
  return x;
}

inline std::vector<double>
random_nonincreasing(std::mt19937_64& gen, std::size_t m, double lo, double hi)
{
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> s(m);
  for (auto& v : s)
    v = u(gen);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

} // namespace oracle
