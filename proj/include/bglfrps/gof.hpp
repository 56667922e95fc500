#pragma once

#include <functional>
#include <vector>

namespace bglfrps {

struct InfoCriteria {
  double aic;
  double aicc;
  double bic;
};

// AIC = -2l + 2k; AICC = AIC + 2k(k+1)/(n-k-1); BIC = -2l + k log n.
InfoCriteria information_criteria(double loglik, int k, int n);

struct KsResult {
  double statistic;
  double p_value;
};

// One-sample K-S distance against a fitted cdf with the asymptotic
// Kolmogorov p-value (series truncated at j = 100).
KsResult ks_test(std::vector<double> data,
                 const std::function<double(double)>& cdf);

struct LrtResult {
  double statistic;
  int df;
  double p_value;
  bool nesting_violation;  // set when loglik_alt < loglik_null
};

LrtResult lrt(double loglik_null, double loglik_alt, int df);

// Upper tail of the chi-square distribution (regularized incomplete gamma).
double chi_square_upper_tail(double x, double df);

// Right-continuous step function i/n at the sorted points.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> data);
  double operator()(double x) const;
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

}  // namespace bglfrps
