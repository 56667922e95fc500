// Release gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bglfrps/bglfrps.hpp"
#include "bglfrps/dataset.hpp"
#include "bglfrps/fitting.hpp"
#include "bglfrps/gof.hpp"

using namespace bglfrps;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", criterion, ok ? "PASS" : "FAIL",
              what.c_str());
  if (!ok) ++failures;
}

struct Model {
  const char* label;
  const char* family;
  double loglik_ref;
};

const Model kModels[] = {
    {"free", "degenerate", 36.6700},   {"geometric", "geometric", 38.3625},
    {"poisson", "poisson", 38.2328},   {"binomial", "binomial:10", 38.1661},
    {"negbinomial", "negbinomial:2", 38.1721},
    {"logarithmic", "logarithmic", 38.3582},
};

std::vector<double> margin_of(const std::vector<BivariatePair>& pairs,
                              int which) {
  std::vector<double> out;
  for (const auto& p : pairs) {
    out.push_back(which == 1 ? p.y1 : which == 2 ? p.y2
                                                 : std::max(p.y1, p.y2));
  }
  return out;
}

double brute_n_mean(const BglfrpsParams& p, double y1, double y2) {
  double sum = 0.0;
  for (int n = 1; n <= 100000; ++n) {
    double q = conditional_n_pmf(p, y1, y2, n);
    sum += n * q;
    if (n > p.family.min_support() && q < 1e-14) break;
  }
  return sum;
}

}  // namespace

int main() {
  BivariateSample data =
      BivariateSample::from_pairs(scale_pairs(embedded_football_pairs(), 0.01));

  // criteria 1, 3 and 5 share the six fitted models
  std::vector<FitReport> fits;
  {
    bool ok = true;
    std::string detail;
    for (const auto& m : kModels) {
      auto t0 = std::chrono::steady_clock::now();
      FitReport r = em_fit(data, PowerSeriesFamily::parse(m.family));
      double secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      fits.push_back(r);
      double delta = r.loglik - m.loglik_ref;
      detail += std::string(m.label) + " " + std::to_string(delta) + "; ";
      if (std::abs(delta) > 0.10 || secs > 60.0) ok = false;
    }
    report(1, ok, "six-model loglik deltas vs reference: " + detail);
  }

  {
    struct Row {
      double ll;
      int k;
      double aic, aicc, bic;
    };
    const Row rows[] = {
        {36.6700, 5, -63.3400, -61.6734, -54.6517},
        {38.3625, 6, -64.7250, -62.3250, -54.2990},
        {38.2328, 6, -64.4657, -62.0657, -54.0396},
        {38.1661, 6, -64.3323, -61.9323, -53.9063},
        {38.1721, 6, -64.3443, -61.9443, -53.9183},
        {38.3582, 6, -64.7164, -62.3164, -54.2904},
    };
    bool ok = true;
    for (const auto& r : rows) {
      InfoCriteria ic = information_criteria(r.ll, r.k, 42);
      ok = ok && std::abs(ic.aic - r.aic) < 0.001 &&
           std::abs(ic.aicc - r.aicc) < 0.001 && std::abs(ic.bic - r.bic) < 0.001;
    }
    report(2, ok, "all 18 information-criteria values match to 0.001");
  }

  {
    struct Ref {
      int fit_index;
      double d1, p1, d2, p2, dm, pm;
    };
    const Ref refs[] = {
        {0, 0.1808, 0.1282, 0.1411, 0.3408, 0.1350, 0.3929},
        {1, 0.1880, 0.1028, 0.1469, 0.2953, 0.1378, 0.3685},
    };
    bool ok = true;
    for (const auto& ref : refs) {
      const BglfrpsParams& p = fits[ref.fit_index].mle;
      auto check = [&](MarginalKind kind, int which, double d, double pv) {
        GlfrpsParams m = marginal(p, kind);
        KsResult r = ks_test(margin_of(data.pairs, which),
                             [&](double x) { return glfrps_cdf(m, x); });
        ok = ok && std::abs(r.statistic - d) < 0.02 &&
             std::abs(r.p_value - pv) < 0.05;
      };
      check(MarginalKind::Y1, 1, ref.d1, ref.p1);
      check(MarginalKind::Y2, 2, ref.d2, ref.p2);
      check(MarginalKind::Max, 3, ref.dm, ref.pm);
    }
    report(3, ok, "K-S statistics and p-values at our fitted parameters");
  }

  report(4, data.m0() == 24 && data.m1() == 16 && data.m2() == 2,
         "tie partition of the embedded data is (24, 16, 2)");

  {
    bool ok = true;
    std::string detail;
    for (size_t i = 0; i < fits.size(); ++i) {
      double mass = total_probability(fits[i].mle);
      detail += std::to_string(mass) + " ";
      if (std::abs(mass - 1.0) > 1e-4) ok = false;
    }
    report(5, ok, "fitted-model total probability: " + detail);
  }

  {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> unif(0.05, 1.2);
    const char* fams[] = {"geometric", "poisson", "logarithmic", "binomial:10",
                          "negbinomial:2"};
    bool ok = true;
    for (const char* f : fams) {
      PowerSeriesFamily fam = PowerSeriesFamily::parse(f);
      double s = fam.support_bound();
      double theta = std::isfinite(s) ? 0.45 * s : 1.4;
      Theta t = fam.make_theta(theta);
      BglfrpsParams p{BglfrParams(0.5, 0.8, 1.1, 1.5, 0.7), fam, t};
      for (int i = 0; i < 50; ++i) {
        double y1 = unif(rng);
        double y2 = i % 4 == 0 ? y1 : unif(rng);
        if (std::abs(conditional_n_mean(p, y1, y2) - brute_n_mean(p, y1, y2)) >
            1e-8) {
          ok = false;
        }
      }
    }
    report(6, ok, "conditional count mean equals the truncated series oracle");
  }

  {
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> au(0.2, 1.5);
    std::uniform_real_distribution<double> bu(0.5, 4.0);
    bool ok = true;
    PowerSeriesFamily fam = PowerSeriesFamily::geometric();
    for (int rep = 0; rep < 20; ++rep) {
      double a1 = au(rng), a2 = au(rng), a3 = au(rng);
      double beta = bu(rng), gamma = bu(rng), theta = 0.2 + 0.5 * au(rng) / 1.5;
      Theta t = fam.make_theta(theta);
      BglfrpsParams truth{BglfrParams(a1, a2, a3, beta, gamma), fam, t};
      std::vector<BivariatePair> pairs(25);
      for (auto& d : pairs) d = sample(truth, rng);
      BivariateSample s = BivariateSample::from_pairs(pairs);
      EStepCache cache;
      cache.b = e_step(truth, s);
      cache.u1 = a1 / (a1 + a3);
      cache.u2 = a3 / (a1 + a3);
      cache.v1 = a2 / (a2 + a3);
      cache.v2 = a3 / (a2 + a3);
      AlphaEstimates a = m_step_alphas(s, cache.b, cache.u1, cache.v1, cache.u2,
                                       cache.v2, beta, gamma);
      double base = pseudo_loglik(s, cache, a.alpha1, a.alpha2, a.alpha3, beta,
                                  gamma, fam, theta);
      auto at = [&](double d1, double d2, double d3) {
        return pseudo_loglik(s, cache, a.alpha1 * (1 + d1),
                             a.alpha2 * (1 + d2), a.alpha3 * (1 + d3), beta,
                             gamma, fam, theta);
      };
      const double h = 1e-6;
      double scale = std::abs(base) + 1.0;
      if (std::abs(at(h, 0, 0) - at(-h, 0, 0)) / (2 * h) > 1e-5 * scale ||
          std::abs(at(0, h, 0) - at(0, -h, 0)) / (2 * h) > 1e-5 * scale ||
          std::abs(at(0, 0, h) - at(0, 0, -h)) / (2 * h) > 1e-5 * scale) {
        ok = false;
      }
    }
    report(7, ok, "closed-form alpha updates zero the pseudo-likelihood partials");
  }

  {
    PowerSeriesFamily fam = PowerSeriesFamily::geometric();
    Theta t = fam.make_theta(0.61);
    BglfrpsParams p{BglfrParams(0.06, 0.42, 0.75, 12.0, 2e-4), fam, t};
    std::mt19937_64 rng(808);
    const int n = 100000;
    std::vector<BivariatePair> draws(n);
    int ties = 0;
    for (auto& d : draws) {
      d = sample(p, rng);
      if (d.y1 == d.y2) ++ties;
    }
    double pt = p.base.alpha3 / p.base.alpha_sum();
    bool ok =
        std::abs(double(ties) / n - pt) < 3.0 * std::sqrt(pt * (1 - pt) / n);
    for (int which = 1; which <= 3; ++which) {
      MarginalKind kind = which == 1   ? MarginalKind::Y1
                          : which == 2 ? MarginalKind::Y2
                                       : MarginalKind::Max;
      GlfrpsParams m = marginal(p, kind);
      KsResult ks = ks_test(margin_of(draws, which),
                            [&](double x) { return glfrps_cdf(m, x); });
      if (ks.statistic >= 0.02) ok = false;
    }
    report(8, ok, "sampler tie frequency and marginal laws match the evaluators");
  }

  {
    bool ok = true;
    for (const char* f : {"geometric", "negbinomial:2"}) {
      PowerSeriesFamily fam = PowerSeriesFamily::parse(f);
      Theta t = fam.make_theta(1e-7);
      BglfrpsParams p{BglfrParams(0.5, 0.8, 1.1, 1.5, 0.7), fam, t};
      BglfrParams limit = limit_theta_zero_reference(p);
      for (double y1 : {0.2, 0.5, 0.9, 1.4, 2.0}) {
        for (double y2 : {0.2, 0.5, 0.9, 1.4, 2.0}) {
          if (std::abs(joint_cdf(p, y1, y2) - bglfr_cdf(limit, y1, y2)) > 1e-5) {
            ok = false;
          }
        }
      }
    }
    report(9, ok, "small-theta law collapses to the scaled base model");
  }

  {
    PowerSeriesFamily fam = PowerSeriesFamily::poisson();
    Theta t = fam.make_theta(1.5);
    BglfrpsParams truth{BglfrParams(0.5, 0.8, 1.1, 2.0, 1.0), fam, t};
    std::mt19937_64 rng(909);
    std::vector<BivariatePair> pairs(2000);
    for (auto& d : pairs) d = sample(truth, rng);
    FitReport r = em_fit(BivariateSample::from_pairs(pairs), fam);
    double w_true = truth.base.alpha3 / truth.base.alpha_sum();
    double w_hat = r.mle.base.alpha3 / r.mle.base.alpha_sum();
    bool ok = std::abs(w_hat - w_true) < 0.05 &&
              std::abs(r.mle.base.beta - truth.base.beta) <
                  0.15 * truth.base.beta;
    report(10, ok,
           "simulation recovery: singular weight " + std::to_string(w_hat) +
               ", beta " + std::to_string(r.mle.base.beta));
  }

  return failures == 0 ? 0 : 1;
}
