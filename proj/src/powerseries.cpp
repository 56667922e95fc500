#include "bglfrps/powerseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bglfrps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kThetaFloor = 1e-8;
constexpr int kMaxSupport = 100000;

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

Theta::Theta(double value, const PowerSeriesFamily& family) : value_(value) {
  if (!(value > 0.0) || !(value < family.support_bound())) {
    std::ostringstream msg;
    msg << "theta=" << value << " outside (0, " << family.support_bound()
        << ") for family " << family.name();
    throw std::domain_error(msg.str());
  }
}

PowerSeriesFamily::PowerSeriesFamily(Kind kind, int replicas,
                                     std::vector<double> coefficients,
                                     double support_bound)
    : kind_(kind),
      replicas_(replicas),
      coefficients_(std::move(coefficients)),
      support_bound_(support_bound) {}

PowerSeriesFamily PowerSeriesFamily::geometric() {
  return PowerSeriesFamily(Kind::Geometric, 0, {}, 1.0);
}

PowerSeriesFamily PowerSeriesFamily::poisson() {
  return PowerSeriesFamily(Kind::Poisson, 0, {}, kInf);
}

PowerSeriesFamily PowerSeriesFamily::logarithmic() {
  return PowerSeriesFamily(Kind::Logarithmic, 0, {}, 1.0);
}

PowerSeriesFamily PowerSeriesFamily::binomial(int replicas) {
  if (replicas < 1) throw std::domain_error("binomial replicas must be >= 1");
  return PowerSeriesFamily(Kind::Binomial, replicas, {}, kInf);
}

PowerSeriesFamily PowerSeriesFamily::negative_binomial(int replicas) {
  if (replicas < 1) {
    throw std::domain_error("negative binomial replicas must be >= 1");
  }
  return PowerSeriesFamily(Kind::NegativeBinomial, replicas, {}, 1.0);
}

PowerSeriesFamily PowerSeriesFamily::custom_polynomial(
    std::vector<double> coefficients) {
  bool any_positive = false;
  for (double a : coefficients) {
    if (a < 0.0) throw std::domain_error("polynomial coefficients must be >= 0");
    if (a > 0.0) any_positive = true;
  }
  if (!any_positive) {
    throw std::domain_error("polynomial needs at least one positive coefficient");
  }
  return PowerSeriesFamily(Kind::CustomPolynomial, 0, std::move(coefficients),
                           kInf);
}

PowerSeriesFamily PowerSeriesFamily::degenerate() {
  return custom_polynomial({1.0});
}

PowerSeriesFamily PowerSeriesFamily::parse(std::string_view spec) {
  std::string s(spec);
  auto colon = s.find(':');
  std::string head = s.substr(0, colon);
  std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "geometric") return geometric();
  if (head == "poisson") return poisson();
  if (head == "logarithmic") return logarithmic();
  if (head == "degenerate") return degenerate();
  if (head == "binomial" || head == "negbinomial") {
    int k = 0;
    try {
      k = std::stoi(tail);
    } catch (const std::exception&) {
      throw std::invalid_argument("family spec '" + s + "': bad replica count");
    }
    return head == "binomial" ? binomial(k) : negative_binomial(k);
  }
  if (head == "poly") {
    std::vector<double> coeffs;
    std::istringstream in(tail);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        coeffs.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("family spec '" + s +
                                    "': bad coefficient '" + tok + "'");
      }
    }
    if (coeffs.empty()) {
      throw std::invalid_argument("family spec '" + s + "': no coefficients");
    }
    return custom_polynomial(std::move(coeffs));
  }
  throw std::invalid_argument("unknown family spec '" + s + "'");
}

int PowerSeriesFamily::min_support() const {
  switch (kind_) {
    case Kind::NegativeBinomial:
      return replicas_;
    case Kind::CustomPolynomial:
      for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        if (coefficients_[i] > 0.0) return static_cast<int>(i) + 1;
      }
      return 1;  // unreachable, construction requires a positive coefficient
    default:
      return 1;
  }
}

bool PowerSeriesFamily::is_degenerate() const {
  if (kind_ != Kind::CustomPolynomial) return false;
  if (coefficients_.size() != 1) {
    for (std::size_t i = 1; i < coefficients_.size(); ++i) {
      if (coefficients_[i] > 0.0) return false;
    }
  }
  return coefficients_[0] > 0.0;
}

std::string PowerSeriesFamily::name() const {
  switch (kind_) {
    case Kind::Geometric:
      return "geometric";
    case Kind::Poisson:
      return "poisson";
    case Kind::Logarithmic:
      return "logarithmic";
    case Kind::Binomial:
      return "binomial:" + std::to_string(replicas_);
    case Kind::NegativeBinomial:
      return "negbinomial:" + std::to_string(replicas_);
    case Kind::CustomPolynomial: {
      std::ostringstream out;
      out << "poly:";
      for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        if (i) out << ',';
        out << coefficients_[i];
      }
      return out.str();
    }
  }
  return "?";
}

double PowerSeriesFamily::coefficient(int n) const {
  if (n < 1) throw std::domain_error("power series index must be >= 1");
  switch (kind_) {
    case Kind::Geometric:
      return 1.0;
    case Kind::Poisson:
      return std::exp(-std::lgamma(n + 1.0));
    case Kind::Logarithmic:
      return 1.0 / n;
    case Kind::Binomial:
      return n > replicas_ ? 0.0 : std::exp(log_binom(replicas_, n));
    case Kind::NegativeBinomial:
      return n < replicas_ ? 0.0 : std::exp(log_binom(n - 1, replicas_ - 1));
    case Kind::CustomPolynomial:
      return n <= static_cast<int>(coefficients_.size()) ? coefficients_[n - 1]
                                                         : 0.0;
  }
  return 0.0;
}

double PowerSeriesFamily::log_coefficient(int n) const {
  if (n < 1) throw std::domain_error("power series index must be >= 1");
  switch (kind_) {
    case Kind::Geometric:
      return 0.0;
    case Kind::Poisson:
      return -std::lgamma(n + 1.0);
    case Kind::Logarithmic:
      return -std::log(static_cast<double>(n));
    case Kind::Binomial:
      return n > replicas_ ? -kInf : log_binom(replicas_, n);
    case Kind::NegativeBinomial:
      return n < replicas_ ? -kInf : log_binom(n - 1, replicas_ - 1);
    case Kind::CustomPolynomial: {
      double a = coefficient(n);
      return a > 0.0 ? std::log(a) : -kInf;
    }
  }
  return -kInf;
}

CDerivs PowerSeriesFamily::derivatives(double theta) const {
  if (theta < 0.0 || theta >= support_bound_) {
    std::ostringstream msg;
    msg << "theta=" << theta << " outside [0, " << support_bound_
        << ") for family " << name();
    throw std::domain_error(msg.str());
  }
  if (theta == 0.0) {
    // Series values at the origin; the closed forms below are 0/0-prone here.
    return CDerivs{0.0, coefficient(1), 2.0 * coefficient(2),
                   6.0 * coefficient(3)};
  }
  CDerivs d;
  const int k = replicas_;
  switch (kind_) {
    case Kind::Geometric: {
      double q = 1.0 - theta;
      d = {theta / q, 1.0 / (q * q), 2.0 / (q * q * q), 6.0 / (q * q * q * q)};
      break;
    }
    case Kind::Poisson: {
      double e = std::exp(theta);
      d = {std::expm1(theta), e, e, e};
      break;
    }
    case Kind::Logarithmic: {
      double q = 1.0 - theta;
      d = {-std::log1p(-theta), 1.0 / q, 1.0 / (q * q), 2.0 / (q * q * q)};
      break;
    }
    case Kind::Binomial: {
      double p1 = std::pow(1.0 + theta, k - 1);
      d = {std::expm1(k * std::log1p(theta)), k * p1,
           k * (k - 1.0) * p1 / (1.0 + theta),
           k * (k - 1.0) * (k - 2.0) * p1 / ((1.0 + theta) * (1.0 + theta))};
      break;
    }
    case Kind::NegativeBinomial: {
      double q = 1.0 - theta;
      double tk = std::pow(theta, k);
      double qk = std::pow(q, k);
      d.c = tk / qk;
      d.c1 = k * std::pow(theta, k - 1) / std::pow(q, k + 1.0);
      d.c2 = k * (k + 2.0 * theta - 1.0) * std::pow(theta, k - 2.0) /
             std::pow(q, k + 2.0);
      d.c3 = k *
             (k * k + 6.0 * k * theta + 6.0 * theta * theta - 3.0 * k -
              6.0 * theta + 2.0) *
             std::pow(theta, k - 3.0) / std::pow(q, k + 3.0);
      break;
    }
    case Kind::CustomPolynomial: {
      for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        double n = static_cast<double>(i) + 1.0;
        double a = coefficients_[i];
        if (a == 0.0) continue;
        d.c += a * std::pow(theta, n);
        d.c1 += a * n * std::pow(theta, n - 1.0);
        if (n >= 2.0) d.c2 += a * n * (n - 1.0) * std::pow(theta, n - 2.0);
        if (n >= 3.0) {
          d.c3 += a * n * (n - 1.0) * (n - 2.0) * std::pow(theta, n - 3.0);
        }
      }
      break;
    }
  }
  if (!std::isfinite(d.c) || !std::isfinite(d.c1) || !std::isfinite(d.c2) ||
      !std::isfinite(d.c3)) {
    std::ostringstream msg;
    msg << "series derivatives overflow at theta=" << theta << " for family "
        << name();
    throw std::domain_error(msg.str());
  }
  return d;
}

double log_pmf(const PowerSeriesFamily& family, const Theta& theta, int n) {
  if (n < 1) throw std::domain_error("power series support starts at n=1");
  double la = family.log_coefficient(n);
  if (la == -kInf) return -kInf;
  double t = theta.value();
  return la + n * std::log(t) - std::log(family.derivatives(t).c);
}

double pmf(const PowerSeriesFamily& family, const Theta& theta, int n) {
  double lp = log_pmf(family, theta, n);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

double mean(const PowerSeriesFamily& family, const Theta& theta) {
  CDerivs d = family.derivatives(theta.value());
  return theta.value() * d.c1 / d.c;
}

ThetaSolution solve_theta_for_mean(const PowerSeriesFamily& family,
                                   double target_mean) {
  if (target_mean < 1.0) {
    throw std::domain_error("power series mean is always >= 1");
  }
  const double s = family.support_bound();
  double lo = kThetaFloor;
  auto mean_at = [&](double t) { return mean(family, family.make_theta(t)); };

  if (target_mean <= mean_at(lo) + 1e-12) {
    return ThetaSolution{family.make_theta(lo), true};
  }

  double hi;
  if (std::isfinite(s)) {
    hi = s - kThetaFloor * s;
  } else {
    hi = 1.0;
    while (hi < 1e15) {
      double m;
      try {
        m = mean_at(hi);
      } catch (const std::domain_error&) {
        break;  // overflow upstream of the target; last finite hi brackets it
      }
      if (m >= target_mean) break;
      hi *= 2.0;
    }
    hi = std::min(hi, 1e15);
  }

  double mean_hi;
  try {
    mean_hi = mean_at(hi);
  } catch (const std::domain_error&) {
    mean_hi = kInf;
  }
  if (mean_hi < target_mean) {
    // Bounded-mean family (e.g. binomial sup = k): pin at the upper clamp.
    return ThetaSolution{family.make_theta(hi), true};
  }

  // Bisection with a secant-proposal refinement; mean is monotone in theta.
  double flo = mean_at(lo) - target_mean;
  for (int iter = 0; iter < 300; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (iter % 2 == 1 && std::isfinite(mean_hi)) {
      double fhi = mean_hi - target_mean;
      if (fhi != flo) {
        double sec = lo - flo * (hi - lo) / (fhi - flo);
        if (sec > lo && sec < hi) mid = sec;
      }
    }
    double fmid;
    try {
      fmid = mean_at(mid) - target_mean;
    } catch (const std::domain_error&) {
      fmid = kInf;
    }
    if (std::abs(fmid) < 1e-10 || hi - lo < 1e-15 * std::max(1.0, lo)) {
      return ThetaSolution{family.make_theta(mid), false};
    }
    if (fmid < 0.0) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      mean_hi = fmid + target_mean;
    }
  }
  return ThetaSolution{family.make_theta(0.5 * (lo + hi)), false};
}

int sample_n(const PowerSeriesFamily& family, const Theta& theta,
             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  double cum = 0.0;
  int n = 0;
  for (int i = 1; i <= kMaxSupport; ++i) {
    double p = pmf(family, theta, i);
    if (p > 0.0) n = i;
    cum += p;
    if (cum >= u) return i;
    if (1.0 - cum < 1e-15 && n > 0) break;
  }
  return n > 0 ? n : 1;
}

}  // namespace bglfrps
