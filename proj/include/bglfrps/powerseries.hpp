#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace bglfrps {

// Bundle of C(theta) and its first three derivatives.
struct CDerivs {
  double c = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

class PowerSeriesFamily;

// theta strictly inside (0, s); construction rejects boundary values.
class Theta {
 public:
  Theta(double value, const PowerSeriesFamily& family);
  double value() const { return value_; }

 private:
  double value_;
};

// Zero-truncated power series mixing law: coefficients a_n, series sum
// C(theta) = sum_{n>=1} a_n theta^n, support bound s.
class PowerSeriesFamily {
 public:
  enum class Kind {
    Geometric,
    Poisson,
    Logarithmic,
    Binomial,
    NegativeBinomial,
    CustomPolynomial,
  };

  static PowerSeriesFamily geometric();
  static PowerSeriesFamily poisson();
  static PowerSeriesFamily logarithmic();
  static PowerSeriesFamily binomial(int replicas);
  static PowerSeriesFamily negative_binomial(int replicas);
  // Coefficients a_1, a_2, ... by degree; all >= 0, at least one > 0.
  static PowerSeriesFamily custom_polynomial(std::vector<double> coefficients);
  // C(theta) = theta, i.e. N == 1 almost surely. The compound class collapses
  // to its base bivariate member.
  static PowerSeriesFamily degenerate();

  // Grammar: geometric | poisson | logarithmic | binomial:k | negbinomial:k |
  // poly:c1,c2,...
  static PowerSeriesFamily parse(std::string_view spec);

  Kind kind() const { return kind_; }
  int replicas() const { return replicas_; }
  double support_bound() const { return support_bound_; }
  // c = min{n : a_n > 0}
  int min_support() const;
  bool is_degenerate() const;
  std::string name() const;

  double coefficient(int n) const;
  double log_coefficient(int n) const;

  // Evaluates C and its first three derivatives at any point in [0, s).
  // Throws on overflow near a finite support bound.
  CDerivs derivatives(double theta) const;

  Theta make_theta(double value) const { return Theta(value, *this); }

 private:
  PowerSeriesFamily(Kind kind, int replicas, std::vector<double> coefficients,
                    double support_bound);

  Kind kind_;
  int replicas_;
  std::vector<double> coefficients_;
  double support_bound_;
};

double pmf(const PowerSeriesFamily& family, const Theta& theta, int n);
double log_pmf(const PowerSeriesFamily& family, const Theta& theta, int n);

// E N = theta C'(theta) / C(theta), strictly increasing in theta.
double mean(const PowerSeriesFamily& family, const Theta& theta);

struct ThetaSolution {
  Theta theta;
  bool clamped = false;
};

// Inverts mean() by bracketed bisection/secant; target_mean < 1 is a domain
// error, targets at or beyond the attainable range clamp with a flag.
ThetaSolution solve_theta_for_mean(const PowerSeriesFamily& family,
                                   double target_mean);

// Inverse-cdf walk with cumulative tail cutoff 1e-15.
int sample_n(const PowerSeriesFamily& family, const Theta& theta,
             std::mt19937_64& rng);

}  // namespace bglfrps
