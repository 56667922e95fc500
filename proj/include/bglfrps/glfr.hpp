#pragma once

#include <random>

namespace bglfrps {

// Generalized linear failure rate parameters. The shape must be positive;
// beta or gamma may be zero (not both) so the generalized-exponential and
// Rayleigh-type submodels stay expressible.
struct GlfrParams {
  double alpha;
  double beta;
  double gamma;

  GlfrParams(double alpha, double beta, double gamma);
};

// Cumulative hazard t(x) = beta x + gamma/2 x^2 and the stable
// log(1 - e^{-t}) primitive shared by all GLFR evaluators.
double glfr_cumhaz(double beta, double gamma, double x);
double log1m_exp_neg(double t);
// Q(y; beta, gamma) = log(1 - e^{-beta y - gamma/2 y^2})
double glfr_log_base_cdf(double beta, double gamma, double x);

double glfr_cdf(const GlfrParams& p, double x);
double glfr_log_cdf(const GlfrParams& p, double x);
// Density; 0 for x <= 0 (not an error, quadrature convenience).
double glfr_pdf(const GlfrParams& p, double x);
double glfr_logpdf(const GlfrParams& p, double x);
// Inverse cdf; u must lie in (0,1).
double glfr_quantile(const GlfrParams& p, double u);
double glfr_sample(const GlfrParams& p, std::mt19937_64& rng);

}  // namespace bglfrps
