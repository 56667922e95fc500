#include "bglfrps/quadrature.hpp"

#include <array>
#include <cmath>

namespace bglfrps {

namespace {

// Kronrod-15 abscissae on [-1, 1] (positive half) with Kronrod weights and
// the embedded Gauss-7 weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  double gauss = 0.0;
  double kronrod = 0.0;
  for (int i = 0; i < 8; ++i) {
    double x = h * kXgk[i];
    double v = i == 7 ? f(c) : f(c - x) + f(c + x);
    kronrod += kWgk[i] * v;
    if (i % 2 == 1) gauss += kWg[i / 2] * v;
  }
  kronrod *= h;
  gauss *= h;
  return {kronrod, std::abs(kronrod - gauss)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth) {
  Panel p = gk15(f, a, b);
  if (p.error <= tol || depth <= 0) return p.kronrod;
  double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, depth - 1) +
         adapt(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  Panel whole = gk15(f, a, b);
  double tol = std::max(abs_tol, rel_tol * std::abs(whole.kronrod));
  if (whole.error <= tol) return whole.kronrod;
  double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, max_depth) +
         adapt(f, mid, b, 0.5 * tol, max_depth);
}

double integrate_lower_triangle(
    const std::function<double(double, double)>& f, double a, double b,
    double abs_tol, double rel_tol) {
  auto outer = [&](double y) {
    return integrate([&](double x) { return f(x, y); }, a, y, 0.1 * abs_tol,
                     0.1 * rel_tol);
  };
  return integrate(outer, a, b, abs_tol, rel_tol);
}

}  // namespace bglfrps
