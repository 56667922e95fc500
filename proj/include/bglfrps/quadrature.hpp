#pragma once

#include <functional>

namespace bglfrps {

// Adaptive Gauss-Kronrod (7-15) integration over a finite interval.
// Subdivides until the Kronrod-Gauss error estimate of each panel meets the
// tolerance apportioned to it, or max_depth is reached.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, double rel_tol = 1e-10,
                 int max_depth = 30);

// Iterated integral of f over the triangle {(x, y) : a < y < b, a < x < y}.
double integrate_lower_triangle(
    const std::function<double(double, double)>& f, double a, double b,
    double abs_tol = 1e-8, double rel_tol = 1e-8);

}  // namespace bglfrps
