#include "logcave/quadrature.hpp"

#include <cmath>

namespace logcave {

namespace {

double
simpson_step(const std::function<double(double)>& f,
             double a,
             double b,
             double fa,
             double fm,
             double fb,
             double whole,
             double tolerance,
             int depth)
{
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double h = b - a;
  double left = h / 12.0 * (fa + 4.0 * flm + fm);
  double right = h / 12.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tolerance)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tolerance, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tolerance, depth - 1);
}

} // namespace

double
adaptive_simpson(const std::function<double(double)>& f,
                 double a,
                 double b,
                 double abs_tolerance,
                 int max_depth)
{
  if (!(b > a))
    return 0.0;
  double fa = f(a);
  double fb = f(b);
  double m = 0.5 * (a + b);
  double fm = f(m);
  // one forced split guards against integrands that vanish at a, m and b
  double fl = f(0.5 * (a + m));
  double fr = f(0.5 * (m + b));
  double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
  return simpson_step(f, a, m, fa, fl, fm, left, 0.5 * abs_tolerance, max_depth - 1) +
         simpson_step(f, m, b, fm, fr, fb, right, 0.5 * abs_tolerance, max_depth - 1);
}

} // namespace logcave
