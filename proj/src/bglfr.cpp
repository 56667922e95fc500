#include "bglfrps/bglfr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bglfrps {

BglfrParams::BglfrParams(double alpha1, double alpha2, double alpha3,
                         double beta, double gamma)
    : alpha1(alpha1), alpha2(alpha2), alpha3(alpha3), beta(beta), gamma(gamma) {
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0)) {
    throw std::domain_error("BGLFR alpha1 and alpha2 must be > 0");
  }
  if (alpha3 < 0.0) throw std::domain_error("BGLFR alpha3 must be >= 0");
  if (beta < 0.0 || gamma < 0.0 || (beta == 0.0 && gamma == 0.0)) {
    throw std::domain_error("BGLFR needs beta, gamma >= 0 with beta + gamma > 0");
  }
}

double bglfr_cdf(const BglfrParams& p, double y1, double y2) {
  if (y1 < 0.0 || y2 < 0.0) {
    throw std::domain_error("BGLFR cdf arguments must be >= 0");
  }
  if (y1 == 0.0 || y2 == 0.0) return 0.0;
  double q1 = glfr_log_base_cdf(p.beta, p.gamma, y1);
  double q2 = glfr_log_base_cdf(p.beta, p.gamma, y2);
  double lf = y1 <= y2 ? (p.alpha1 + p.alpha3) * q1 + p.alpha2 * q2
                       : p.alpha1 * q1 + (p.alpha2 + p.alpha3) * q2;
  return std::exp(lf);
}

BivariatePair bglfr_sample(const BglfrParams& p, std::mt19937_64& rng) {
  double z1 = glfr_sample(GlfrParams(p.alpha1, p.beta, p.gamma), rng);
  double z2 = glfr_sample(GlfrParams(p.alpha2, p.beta, p.gamma), rng);
  if (p.alpha3 == 0.0) return {z1, z2};
  double z3 = glfr_sample(GlfrParams(p.alpha3, p.beta, p.gamma), rng);
  return {std::max(z1, z3), std::max(z2, z3)};
}

}  // namespace bglfrps
