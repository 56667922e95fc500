#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bglfrps/bglfrps.hpp"

namespace bglfrps {

// Observation pairs plus the induced tie partition I0 / I1 / I2.
struct BivariateSample {
  std::vector<BivariatePair> pairs;
  std::vector<int> i0;  // y1 == y2
  std::vector<int> i1;  // y1 < y2
  std::vector<int> i2;  // y1 > y2

  // tie_tol > 0 coarsens tie detection: pairs closer than tie_tol are
  // replaced by their midpoint and counted as exact ties.
  static BivariateSample from_pairs(std::vector<BivariatePair> pairs,
                                    double tie_tol = 0.0);

  int m0() const { return static_cast<int>(i0.size()); }
  int m1() const { return static_cast<int>(i1.size()); }
  int m2() const { return static_cast<int>(i2.size()); }
  int m() const { return static_cast<int>(pairs.size()); }
};

// Per-outer-iteration EM quantities: conditional latent-count means and the
// fractional tie-breaking probabilities.
struct EStepCache {
  std::vector<double> b;
  double u1 = 1.0;
  double u2 = 0.0;
  double v1 = 1.0;
  double v2 = 0.0;
};

struct AlphaEstimates {
  double alpha1;
  double alpha2;
  double alpha3;
  bool floored = false;
};

struct FitControls {
  double tol = 1e-6;
  int max_iter = 1000;
  // Direct simplex refinement of the observed log-likelihood from the best
  // EM iterate.
  bool polish = true;
  std::optional<BglfrpsParams> init;
};

struct FitReport {
  BglfrpsParams mle;
  double loglik;
  int iterations;
  bool converged;
  std::vector<double> loglik_trace;
  int m0, m1, m2;
  std::vector<std::string> clamp_notes;
};

// Sum of log f0 / f1 / f2 over the partition; -inf when any observation has
// zero density (rejected by the optimizer, not an exception).
double observed_loglik(const BglfrpsParams& p, const BivariateSample& s);

// b_i = E(N | y_1i, y_2i) at the current parameters.
std::vector<double> e_step(const BglfrpsParams& p, const BivariateSample& s);

// Closed-form alpha maximizers of the pseudo log-likelihood at fixed
// (beta, gamma); each is floored at 1e-8 when its count numerator vanishes.
AlphaEstimates m_step_alphas(const BivariateSample& s,
                             const std::vector<double>& b, double u1,
                             double v1, double u2, double v2, double beta,
                             double gamma);

ThetaSolution m_step_theta(const PowerSeriesFamily& family, double b_bar);

// Complete pseudo log-likelihood at explicit parameters.
double pseudo_loglik(const BivariateSample& s, const EStepCache& cache,
                     double alpha1, double alpha2, double alpha3, double beta,
                     double gamma, const PowerSeriesFamily& family,
                     double theta);

// Pseudo log-likelihood with the closed-form alpha-hats substituted in.
double pseudo_profile_objective(double beta, double gamma,
                                const BivariateSample& s,
                                const EStepCache& cache,
                                const PowerSeriesFamily& family, double theta);

FitReport em_fit(const BivariateSample& s, const PowerSeriesFamily& family,
                 const FitControls& controls = {});

void write_fit_report(std::ostream& out, const FitReport& report);

// --- derivative-free search primitives ---

struct NmResult {
  std::vector<double> x;
  double value;
  bool converged;
};

// Simplex maximization; restarts once from a perturbed start on collapse.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<double> start, double step = 0.5,
                     double tol = 1e-8, int max_iter = 500);

struct NmResult2d {
  double x;
  double y;
  double value;
  bool converged;
};

NmResult2d nelder_mead_2d(const std::function<double(double, double)>& f,
                          double x0, double y0, double step = 0.5,
                          double tol = 1e-8, int max_iter = 500);

// Bracketed root finder; the bracket must change sign.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-12, int max_iter = 200);

}  // namespace bglfrps
