#pragma once

#include <random>

#include "bglfrps/glfr.hpp"

namespace bglfrps {

struct BivariatePair {
  double y1;
  double y2;
};

// Bivariate GLFR shape triplet with shared beta, gamma. alpha3 = 0 removes
// the singular diagonal component and makes the components independent.
struct BglfrParams {
  double alpha1;
  double alpha2;
  double alpha3;
  double beta;
  double gamma;

  BglfrParams(double alpha1, double alpha2, double alpha3, double beta,
              double gamma);

  double alpha_sum() const { return alpha1 + alpha2 + alpha3; }
};

double bglfr_cdf(const BglfrParams& p, double y1, double y2);

// Trivariate reduction: Y1 = max(Z1, Z3), Y2 = max(Z2, Z3) with independent
// Zj ~ GLFR(alpha_j). Ties are exact: Y1 == Y2 iff Z3 > max(Z1, Z2).
BivariatePair bglfr_sample(const BglfrParams& p, std::mt19937_64& rng);

}  // namespace bglfrps
