#pragma once

#include <functional>

namespace logcave {

//! Adaptive Simpson quadrature of f over [a, b]. Subdivides until the local
//! error estimate |S_fine - S_coarse| / 15 falls below the tolerance share
//! of the subinterval, or `max_depth` halvings have been made.
double adaptive_simpson(const std::function<double(double)>& f,
                        double a,
                        double b,
                        double abs_tolerance,
                        int max_depth = 40);

} // namespace logcave
