#include "bglfrps/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bglfrps {

InfoCriteria information_criteria(double loglik, int k, int n) {
  if (k > 0 && n <= k + 1) {
    throw std::domain_error("AICC undefined for n <= k + 1");
  }
  double aic = -2.0 * loglik + 2.0 * k;
  double aicc = k > 0 ? aic + 2.0 * k * (k + 1.0) / (n - k - 1.0) : aic;
  double bic = -2.0 * loglik + (k > 0 ? k * std::log(double(n)) : 0.0);
  return {aic, aicc, bic};
}

KsResult ks_test(std::vector<double> data,
                 const std::function<double(double)>& cdf) {
  if (data.empty()) throw std::domain_error("K-S test needs data");
  std::sort(data.begin(), data.end());
  const double n = static_cast<double>(data.size());
  double d = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double f = cdf(data[i]);
    d = std::max(d, (i + 1.0) / n - f);
    d = std::max(d, f - i / n);
  }
  double lambda2 = n * d * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = 2.0 * std::exp(-2.0 * j * j * lambda2);
    p += (j % 2 == 1) ? term : -term;
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

LrtResult lrt(double loglik_null, double loglik_alt, int df) {
  double stat = 2.0 * (loglik_alt - loglik_null);
  LrtResult out{stat, df, 1.0, stat < 0.0};
  out.p_value = stat <= 0.0 ? 1.0 : chi_square_upper_tail(stat, df);
  return out;
}

namespace {

// Regularized lower incomplete gamma P(a, x) by series; upper Q(a, x) by
// continued fraction (Lentz). Standard split at x = a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_upper_tail(double x, double df) {
  if (df <= 0.0) throw std::domain_error("chi-square df must be > 0");
  if (x <= 0.0) return 1.0;
  double a = 0.5 * df;
  double xx = 0.5 * x;
  if (xx < a + 1.0) return 1.0 - gamma_p_series(a, xx);
  return gamma_q_contfrac(a, xx);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> data)
    : sorted_(std::move(data)) {
  if (sorted_.empty()) throw std::domain_error("empirical cdf needs data");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / sorted_.size();
}

}  // namespace bglfrps
