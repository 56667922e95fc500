#include "bglfrps/glfr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bglfrps {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

GlfrParams::GlfrParams(double alpha, double beta, double gamma)
    : alpha(alpha), beta(beta), gamma(gamma) {
  if (!(alpha > 0.0)) throw std::domain_error("GLFR alpha must be > 0");
  if (beta < 0.0 || gamma < 0.0) {
    throw std::domain_error("GLFR beta and gamma must be >= 0");
  }
  if (beta == 0.0 && gamma == 0.0) {
    throw std::domain_error("GLFR needs beta + gamma > 0");
  }
}

double glfr_cumhaz(double beta, double gamma, double x) {
  return beta * x + 0.5 * gamma * x * x;
}

double log1m_exp_neg(double t) {
  if (t <= 0.0) return -kInf;
  // log(1 - e^{-t}); switch branches at log 2 to keep full precision.
  if (t < 0.6931471805599453) return std::log(-std::expm1(-t));
  return std::log1p(-std::exp(-t));
}

double glfr_log_base_cdf(double beta, double gamma, double x) {
  return log1m_exp_neg(glfr_cumhaz(beta, gamma, x));
}

double glfr_log_cdf(const GlfrParams& p, double x) {
  if (x < 0.0) throw std::domain_error("GLFR cdf argument must be >= 0");
  if (x == 0.0) return -kInf;
  return p.alpha * glfr_log_base_cdf(p.beta, p.gamma, x);
}

double glfr_cdf(const GlfrParams& p, double x) {
  double l = glfr_log_cdf(p, x);
  return l == -kInf ? 0.0 : std::exp(l);
}

double glfr_logpdf(const GlfrParams& p, double x) {
  if (x <= 0.0) return -kInf;
  double t = glfr_cumhaz(p.beta, p.gamma, x);
  double hazard = p.beta + p.gamma * x;
  return std::log(p.alpha) + std::log(hazard) - t +
         (p.alpha - 1.0) * log1m_exp_neg(t);
}

double glfr_pdf(const GlfrParams& p, double x) {
  double l = glfr_logpdf(p, x);
  return l == -kInf ? 0.0 : std::exp(l);
}

double glfr_quantile(const GlfrParams& p, double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("quantile probability must be in (0,1)");
  }
  // Solve t(x) = -log(1 - u^{1/alpha}) for x.
  double t = -std::log1p(-std::exp(std::log(u) / p.alpha));
  if (p.gamma == 0.0) return t / p.beta;
  return (-p.beta + std::sqrt(p.beta * p.beta + 2.0 * p.gamma * t)) / p.gamma;
}

double glfr_sample(const GlfrParams& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(
      std::numeric_limits<double>::min(), 1.0);
  return glfr_quantile(p, unif(rng));
}

}  // namespace bglfrps
