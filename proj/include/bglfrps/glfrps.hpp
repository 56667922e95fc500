#pragma once

#include "bglfrps/glfr.hpp"
#include "bglfrps/powerseries.hpp"

namespace bglfrps {

// Univariate GLFR-power-series law: the marginal distribution of each
// component and of the componentwise maximum.
struct GlfrpsParams {
  GlfrParams glfr;
  PowerSeriesFamily family;
  Theta theta;
};

// F(x) = C(theta F_G(x)) / C(theta)
double glfrps_cdf(const GlfrpsParams& p, double x);
// f(x) = theta f_G(x) C'(theta F_G(x)) / C(theta)
double glfrps_pdf(const GlfrpsParams& p, double x);
double glfrps_logpdf(const GlfrpsParams& p, double x);

}  // namespace bglfrps
