#include "bglfrps/glfrps.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bglfrps {

double glfrps_cdf(const GlfrpsParams& p, double x) {
  if (x < 0.0) throw std::domain_error("GLFRPS cdf argument must be >= 0");
  double t = p.theta.value();
  double z = t * glfr_cdf(p.glfr, x);
  return p.family.derivatives(z).c / p.family.derivatives(t).c;
}

double glfrps_logpdf(const GlfrpsParams& p, double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  double t = p.theta.value();
  double z = t * glfr_cdf(p.glfr, x);
  return std::log(t) + glfr_logpdf(p.glfr, x) +
         std::log(p.family.derivatives(z).c1) -
         std::log(p.family.derivatives(t).c);
}

double glfrps_pdf(const GlfrpsParams& p, double x) {
  double l = glfrps_logpdf(p, x);
  return std::isfinite(l) ? std::exp(l) : 0.0;
}

}  // namespace bglfrps
