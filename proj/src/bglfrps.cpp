#include "bglfrps/bglfrps.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "bglfrps/quadrature.hpp"

namespace bglfrps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// theta * F_G(y1; a) * F_G(y2; b), assembled in log space.
double scaled_product(const BglfrpsParams& p, double y1, double a, double y2,
                      double b) {
  double lf = a * glfr_log_base_cdf(p.base.beta, p.base.gamma, y1) +
              b * glfr_log_base_cdf(p.base.beta, p.base.gamma, y2);
  return p.theta.value() * std::exp(lf);
}

// Off-diagonal density piece: role (a, b) is (a1+a3, a2) below the diagonal
// and (a1, a2+a3) above it.
double log_f_offdiag(const BglfrpsParams& p, double y1, double a, double y2,
                     double b) {
  double t = p.theta.value();
  double z = scaled_product(p, y1, a, y2, b);
  CDerivs dz = p.family.derivatives(z);
  return std::log(t) - std::log(p.family.derivatives(t).c) +
         glfr_logpdf(GlfrParams(a, p.base.beta, p.base.gamma), y1) +
         glfr_logpdf(GlfrParams(b, p.base.beta, p.base.gamma), y2) +
         std::log(z * dz.c2 + dz.c1);
}

double log_f_diag(const BglfrpsParams& p, double y) {
  if (p.base.alpha3 == 0.0) return -kInf;
  double t = p.theta.value();
  double asum = p.base.alpha_sum();
  GlfrParams max_law(asum, p.base.beta, p.base.gamma);
  double z = t * glfr_cdf(max_law, y);
  return std::log(t) + std::log(p.base.alpha3) -
         std::log(p.family.derivatives(t).c) - std::log(asum) +
         glfr_logpdf(max_law, y) + std::log(p.family.derivatives(z).c1);
}

double log_density_by_region(const BglfrpsParams& p, double y1, double y2,
                             Region region) {
  switch (region) {
    case Region::Lower:
      return log_f_offdiag(p, y1, p.base.alpha1 + p.base.alpha3, y2,
                           p.base.alpha2);
    case Region::Upper:
      return log_f_offdiag(p, y1, p.base.alpha1, y2,
                           p.base.alpha2 + p.base.alpha3);
    case Region::Diagonal:
      return log_f_diag(p, y1);
  }
  return -kInf;
}

// z = theta A_r(y1, y2) of the conditional-N law for the given region.
double conditional_scale(const BglfrpsParams& p, double y1, double y2,
                         Region region) {
  switch (region) {
    case Region::Lower:
      return scaled_product(p, y1, p.base.alpha1 + p.base.alpha3, y2,
                            p.base.alpha2);
    case Region::Upper:
      return scaled_product(p, y1, p.base.alpha1, y2,
                            p.base.alpha2 + p.base.alpha3);
    case Region::Diagonal:
      return p.theta.value() *
             glfr_cdf(GlfrParams(p.base.alpha_sum(), p.base.beta,
                                 p.base.gamma),
                      y1);
  }
  return 0.0;
}

}  // namespace

Region classify_region(double y1, double y2) {
  if (y1 == y2) return Region::Diagonal;
  return y1 < y2 ? Region::Lower : Region::Upper;
}

double joint_cdf(const BglfrpsParams& p, double y1, double y2) {
  if (y1 < 0.0 || y2 < 0.0) {
    throw std::domain_error("joint cdf arguments must be >= 0");
  }
  if (y1 == 0.0 || y2 == 0.0) return 0.0;
  double z = y1 <= y2 ? scaled_product(p, y1, p.base.alpha1 + p.base.alpha3,
                                       y2, p.base.alpha2)
                      : scaled_product(p, y1, p.base.alpha1, y2,
                                       p.base.alpha2 + p.base.alpha3);
  return p.family.derivatives(z).c /
         p.family.derivatives(p.theta.value()).c;
}

double joint_logpdf(const BglfrpsParams& p, double y1, double y2) {
  if (y1 <= 0.0 || y2 <= 0.0) {
    throw std::domain_error("joint pdf arguments must be > 0");
  }
  return log_density_by_region(p, y1, y2, classify_region(y1, y2));
}

JointDensityValue joint_pdf(const BglfrpsParams& p, double y1, double y2) {
  Region region = classify_region(y1, y2);
  double lv = joint_logpdf(p, y1, y2);
  return {region, lv == -kInf ? 0.0 : std::exp(lv), lv};
}

AcSingularSplit ac_singular_split(const BglfrpsParams& p, double y1,
                                  double y2) {
  double a12 = p.base.alpha1 + p.base.alpha2;
  if (a12 <= 0.0) throw std::domain_error("alpha1 + alpha2 must be > 0");
  double asum = p.base.alpha_sum();
  AcSingularSplit out{a12 / asum, p.base.alpha3 / asum, 0.0, 0.0};
  Region region = classify_region(y1, y2);
  if (region == Region::Diagonal) {
    double t = p.theta.value();
    GlfrParams max_law(asum, p.base.beta, p.base.gamma);
    double z = t * glfr_cdf(max_law, y1);
    out.singular_density = t / p.family.derivatives(t).c *
                           glfr_pdf(max_law, y1) *
                           p.family.derivatives(z).c1;
  } else {
    double lv = log_density_by_region(p, y1, y2, region);
    out.ac_density = lv == -kInf ? 0.0 : std::exp(lv) * asum / a12;
  }
  return out;
}

GlfrpsParams marginal(const BglfrpsParams& p, MarginalKind which) {
  double shape = 0.0;
  switch (which) {
    case MarginalKind::Y1:
      shape = p.base.alpha1 + p.base.alpha3;
      break;
    case MarginalKind::Y2:
      shape = p.base.alpha2 + p.base.alpha3;
      break;
    case MarginalKind::Max:
      shape = p.base.alpha_sum();
      break;
  }
  return GlfrpsParams{GlfrParams(shape, p.base.beta, p.base.gamma), p.family,
                      p.theta};
}

double conditional_cdf_given_le(const BglfrpsParams& p, double y1, double y2) {
  if (!(y2 > 0.0)) throw std::domain_error("conditioning bound must be > 0");
  double denom = glfrps_cdf(marginal(p, MarginalKind::Y2), y2);
  if (denom <= 0.0) {
    throw std::domain_error("conditional cdf undefined: P(Y2 <= y2) = 0");
  }
  return joint_cdf(p, y1, y2) / denom;
}

double conditional_n_pmf(const BglfrpsParams& p, double y1, double y2, int n) {
  if (n < 1) throw std::domain_error("latent count support starts at n=1");
  if (y1 <= 0.0 || y2 <= 0.0) {
    throw std::domain_error("conditional pmf needs positive coordinates");
  }
  Region region = classify_region(y1, y2);
  double la = p.family.log_coefficient(n);
  if (la == -kInf) return 0.0;
  double z = conditional_scale(p, y1, y2, region);
  CDerivs dz = p.family.derivatives(z);
  double weight = std::exp(la + (n - 1.0) * std::log(z));
  if (region == Region::Diagonal) return n * weight / dz.c1;
  return n * static_cast<double>(n) * weight / (z * dz.c2 + dz.c1);
}

double conditional_n_mean(const BglfrpsParams& p, double y1, double y2) {
  if (y1 <= 0.0 || y2 <= 0.0) {
    throw std::domain_error("conditional mean needs positive coordinates");
  }
  Region region = classify_region(y1, y2);
  double z = conditional_scale(p, y1, y2, region);
  CDerivs d = p.family.derivatives(z);
  if (region == Region::Diagonal) return (z * d.c2 + d.c1) / d.c1;
  return (z * z * d.c3 + 3.0 * z * d.c2 + d.c1) / (z * d.c2 + d.c1);
}

BivariatePair sample(const BglfrpsParams& p, std::mt19937_64& rng) {
  int n = sample_n(p.family, p.theta, rng);
  BglfrParams scaled(n * p.base.alpha1, n * p.base.alpha2, n * p.base.alpha3,
                     p.base.beta, p.base.gamma);
  return bglfr_sample(scaled, rng);
}

BglfrParams limit_theta_zero_reference(const BglfrpsParams& p) {
  double c = p.family.min_support();
  return BglfrParams(c * p.base.alpha1, c * p.base.alpha2, c * p.base.alpha3,
                     p.base.beta, p.base.gamma);
}

double total_probability(const BglfrpsParams& p, double tol) {
  GlfrParams max_law(p.base.alpha_sum(), p.base.beta, p.base.gamma);
  double hi = glfr_quantile(max_law, 1.0 - 1e-10);
  auto lower = [&](double x, double y) {
    return std::exp(log_f_offdiag(p, x, p.base.alpha1 + p.base.alpha3, y,
                                  p.base.alpha2));
  };
  auto upper = [&](double y, double x) {
    return std::exp(log_f_offdiag(p, x, p.base.alpha1, y,
                                  p.base.alpha2 + p.base.alpha3));
  };
  double ac = integrate_lower_triangle(lower, 0.0, hi, tol, tol) +
              integrate_lower_triangle(upper, 0.0, hi, tol, tol);
  double diag = 0.0;
  if (p.base.alpha3 > 0.0) {
    diag = integrate([&](double y) { return std::exp(log_f_diag(p, y)); }, 0.0,
                     hi, tol, tol);
  }
  return ac + diag;
}

void write_density_grid(std::ostream& out, const BglfrpsParams& p, double lo,
                        double hi, int points) {
  if (points < 2) throw std::domain_error("grid needs at least 2 points");
  double step = (hi - lo) / (points - 1);
  out << "# y1\ty2\tf\n";
  for (int i = 0; i < points; ++i) {
    double y1 = lo + i * step;
    for (int j = 0; j < points; ++j) {
      double y2 = lo + j * step;
      double f = 0.0;
      if (y1 > 0.0 && y2 > 0.0) {
        // Diagonal lattice points take the below-diagonal AC limit.
        Region region = y1 <= y2 ? Region::Lower : Region::Upper;
        double lv = log_density_by_region(p, y1, y2, region);
        f = lv == -kInf ? 0.0 : std::exp(lv);
      }
      out << y1 << '\t' << y2 << '\t' << f << '\n';
    }
  }
  out << "\n# y\tf0\n";
  for (int i = 0; i < points; ++i) {
    double y = lo + i * step;
    double f0 = 0.0;
    if (y > 0.0) {
      double lv = log_f_diag(p, y);
      f0 = lv == -kInf ? 0.0 : std::exp(lv);
    }
    out << y << '\t' << f0 << '\n';
  }
}

}  // namespace bglfrps
