#pragma once

#include <iosfwd>
#include <random>

#include "bglfrps/bglfr.hpp"
#include "bglfrps/glfrps.hpp"
#include "bglfrps/powerseries.hpp"

namespace bglfrps {

// Compound class: componentwise maxima of N i.i.d. BGLFR pairs with N
// power-series distributed.
struct BglfrpsParams {
  BglfrParams base;
  PowerSeriesFamily family;
  Theta theta;
};

enum class Region { Lower, Upper, Diagonal };

Region classify_region(double y1, double y2);

// Density value with its region: planar Lebesgue density off the diagonal,
// one-dimensional density along it.
struct JointDensityValue {
  Region region;
  double value;
  double log_value;
};

double joint_cdf(const BglfrpsParams& p, double y1, double y2);

JointDensityValue joint_pdf(const BglfrpsParams& p, double y1, double y2);
double joint_logpdf(const BglfrpsParams& p, double y1, double y2);

// Decomposition f = w_a g_a + w_s g_s with w_s = alpha3 / (a1+a2+a3).
struct AcSingularSplit {
  double ac_weight;
  double singular_weight;
  double ac_density;        // g_a at (y1, y2); 0 on the diagonal
  double singular_density;  // g_s at y1 (== y2); 0 off the diagonal
};

AcSingularSplit ac_singular_split(const BglfrpsParams& p, double y1, double y2);

enum class MarginalKind { Y1, Y2, Max };

GlfrpsParams marginal(const BglfrpsParams& p, MarginalKind which);

// P(Y1 <= y1 | Y2 <= y2)
double conditional_cdf_given_le(const BglfrpsParams& p, double y1, double y2);

// Conditional law of the latent count N given an observed pair.
double conditional_n_pmf(const BglfrpsParams& p, double y1, double y2, int n);
double conditional_n_mean(const BglfrpsParams& p, double y1, double y2);

// Draw N from the mixing law, then one pair from BGLFR(n a1, n a2, n a3).
BivariatePair sample(const BglfrpsParams& p, std::mt19937_64& rng);

// Theta-to-zero limit: BGLFR(c a1, c a2, c a3) with c = min{n : a_n > 0}.
BglfrParams limit_theta_zero_reference(const BglfrpsParams& p);

// AC double integral over both triangles plus the singular line integral;
// equals 1 for any valid parameter vector.
double total_probability(const BglfrpsParams& p, double tol = 1e-6);

// Tab-separated grid of the AC density over [lo, hi]^2 followed by a
// diagonal block of the singular density.
void write_density_grid(std::ostream& out, const BglfrpsParams& p, double lo,
                        double hi, int points);

}  // namespace bglfrps
