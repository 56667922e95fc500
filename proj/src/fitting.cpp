#include "bglfrps/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace bglfrps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAlphaLo = 1e-8;
constexpr double kAlphaHi = 1e4;
constexpr double kBetaLo = 1e-8;
constexpr double kBetaHi = 1e6;
constexpr double kGammaHi = 1e8;

double Q(double y, double beta, double gamma) {
  return glfr_log_base_cdf(beta, gamma, y);
}

}  // namespace

BivariateSample BivariateSample::from_pairs(std::vector<BivariatePair> pairs,
                                            double tie_tol) {
  BivariateSample s;
  s.pairs = std::move(pairs);
  for (int i = 0; i < static_cast<int>(s.pairs.size()); ++i) {
    auto& pr = s.pairs[i];
    if (!(pr.y1 > 0.0) || !(pr.y2 > 0.0)) {
      throw std::domain_error("observations must be positive");
    }
    if (tie_tol > 0.0 && pr.y1 != pr.y2 &&
        std::abs(pr.y1 - pr.y2) <= tie_tol) {
      double mid = 0.5 * (pr.y1 + pr.y2);
      pr.y1 = pr.y2 = mid;
    }
    if (pr.y1 == pr.y2) {
      s.i0.push_back(i);
    } else if (pr.y1 < pr.y2) {
      s.i1.push_back(i);
    } else {
      s.i2.push_back(i);
    }
  }
  return s;
}

double observed_loglik(const BglfrpsParams& p, const BivariateSample& s) {
  double ll = 0.0;
  for (const auto& pr : s.pairs) {
    double lv;
    try {
      lv = joint_logpdf(p, pr.y1, pr.y2);
    } catch (const std::domain_error&) {
      return -kInf;
    }
    if (!std::isfinite(lv)) return -kInf;
    ll += lv;
  }
  return ll;
}

std::vector<double> e_step(const BglfrpsParams& p, const BivariateSample& s) {
  std::vector<double> b;
  b.reserve(s.pairs.size());
  for (const auto& pr : s.pairs) {
    b.push_back(conditional_n_mean(p, pr.y1, pr.y2));
  }
  return b;
}

AlphaEstimates m_step_alphas(const BivariateSample& s,
                             const std::vector<double>& b, double u1,
                             double v1, double u2, double v2, double beta,
                             double gamma) {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  for (int i : s.i0) {
    double q = b[i] * Q(s.pairs[i].y1, beta, gamma);
    d1 += q;
    d2 += q;
    d3 += q;
  }
  for (int i : s.i1) {
    double q1 = b[i] * Q(s.pairs[i].y1, beta, gamma);
    d1 += q1;
    d2 += b[i] * Q(s.pairs[i].y2, beta, gamma);
    d3 += q1;  // on I1 the shared component is censored at y1
  }
  for (int i : s.i2) {
    double q2 = b[i] * Q(s.pairs[i].y2, beta, gamma);
    d1 += b[i] * Q(s.pairs[i].y1, beta, gamma);
    d2 += q2;
    d3 += q2;
  }
  if (!(d1 < 0.0) || !(d2 < 0.0) || !(d3 < 0.0)) {
    throw std::domain_error("degenerate data: alpha denominators vanish");
  }
  double n1 = s.m1() * u1 + s.m2();
  double n2 = s.m1() + s.m2() * v1;
  double n3 = s.m0() + s.m1() * u2 + s.m2() * v2;
  AlphaEstimates out{-n1 / d1, -n2 / d2, -n3 / d3, false};
  for (double* a : {&out.alpha1, &out.alpha2, &out.alpha3}) {
    if (!(*a >= kAlphaLo)) {
      *a = kAlphaLo;
      out.floored = true;
    }
  }
  return out;
}

ThetaSolution m_step_theta(const PowerSeriesFamily& family, double b_bar) {
  return solve_theta_for_mean(family, b_bar);
}

double pseudo_loglik(const BivariateSample& s, const EStepCache& cache,
                     double alpha1, double alpha2, double alpha3, double beta,
                     double gamma, const PowerSeriesFamily& family,
                     double theta) {
  const auto& b = cache.b;
  double sum_b = std::accumulate(b.begin(), b.end(), 0.0);
  double ll = sum_b * std::log(theta) -
              s.m() * std::log(family.derivatives(theta).c);
  for (int i : s.i0) {
    double y = s.pairs[i].y1;
    double hz = beta + gamma * y;
    if (!(hz > 0.0)) return -kInf;
    double q = Q(y, beta, gamma);
    ll += std::log(hz) - beta * y - 0.5 * gamma * y * y +
          (b[i] * (alpha1 + alpha2 + alpha3) - 1.0) * q;
  }
  auto offdiag = [&](int i, bool shared_at_y1) {
    double y1 = s.pairs[i].y1;
    double y2 = s.pairs[i].y2;
    double h1 = beta + gamma * y1;
    double h2 = beta + gamma * y2;
    if (!(h1 > 0.0) || !(h2 > 0.0)) return -kInf;
    double q1 = Q(y1, beta, gamma);
    double q2 = Q(y2, beta, gamma);
    return std::log(h1) + std::log(h2) - beta * (y1 + y2) -
           0.5 * gamma * (y1 * y1 + y2 * y2) +
           b[i] * (alpha1 * q1 + alpha2 * q2 +
                   alpha3 * (shared_at_y1 ? q1 : q2)) -
           q1 - q2;
  };
  for (int i : s.i1) {
    double v = offdiag(i, true);
    if (v == -kInf) return -kInf;
    ll += v;
  }
  for (int i : s.i2) {
    double v = offdiag(i, false);
    if (v == -kInf) return -kInf;
    ll += v;
  }
  double n1 = s.m1() * cache.u1 + s.m2();
  double n2 = s.m1() + s.m2() * cache.v1;
  double n3 = s.m0() + s.m1() * cache.u2 + s.m2() * cache.v2;
  if (n1 > 0.0) ll += n1 * std::log(alpha1);
  if (n2 > 0.0) ll += n2 * std::log(alpha2);
  if (n3 > 0.0) ll += n3 * std::log(alpha3);
  return ll;
}

double pseudo_profile_objective(double beta, double gamma,
                                const BivariateSample& s,
                                const EStepCache& cache,
                                const PowerSeriesFamily& family,
                                double theta) {
  if (!(beta > 0.0) || gamma < 0.0) return -kInf;
  AlphaEstimates a =
      m_step_alphas(s, cache.b, cache.u1, cache.v1, cache.u2, cache.v2, beta,
                    gamma);
  return pseudo_loglik(s, cache, a.alpha1, a.alpha2, a.alpha3, beta, gamma,
                       family, theta);
}

// --- numerical search primitives ---

namespace {

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;
};

double diameter(const Simplex& sp) {
  double d = 0.0;
  for (std::size_t i = 1; i < sp.x.size(); ++i) {
    for (std::size_t j = 0; j < sp.x[i].size(); ++j) {
      d = std::max(d, std::abs(sp.x[i][j] - sp.x[0][j]));
    }
  }
  return d;
}

NmResult nelder_mead_once(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& start, double step, double tol, int max_iter) {
  const std::size_t n = start.size();
  Simplex sp;
  sp.x.push_back(start);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = start;
    v[i] += step;
    sp.x.push_back(v);
  }
  sp.f.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) sp.f[i] = f(sp.x[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return sp.f[a] > sp.f[b]; });
    Simplex sorted;
    for (auto i : idx) {
      sorted.x.push_back(sp.x[i]);
      sorted.f.push_back(sp.f[i]);
    }
    sp = std::move(sorted);
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    double spread = std::abs(sp.f[0] - sp.f[n]);
    if (spread < tol * (std::abs(sp.f[0]) + tol) && diameter(sp) < 1e3 * tol) {
      return {sp.x[0], sp.f[0], true};
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += sp.x[i][j];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    auto at = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) {
        p[j] = centroid[j] + coef * (sp.x[n][j] - centroid[j]);
      }
      return p;
    };

    auto refl = at(-1.0);
    double frefl = f(refl);
    if (frefl > sp.f[0]) {
      auto expd = at(-2.0);
      double fexpd = f(expd);
      if (fexpd > frefl) {
        sp.x[n] = expd;
        sp.f[n] = fexpd;
      } else {
        sp.x[n] = refl;
        sp.f[n] = frefl;
      }
      continue;
    }
    if (frefl > sp.f[n - 1]) {
      sp.x[n] = refl;
      sp.f[n] = frefl;
      continue;
    }
    auto contr = at(frefl > sp.f[n] ? -0.5 : 0.5);
    double fcontr = f(contr);
    if (fcontr > std::max(frefl, sp.f[n])) {
      sp.x[n] = contr;
      sp.f[n] = fcontr;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        sp.x[i][j] = sp.x[0][j] + 0.5 * (sp.x[i][j] - sp.x[0][j]);
      }
      sp.f[i] = f(sp.x[i]);
    }
  }
  order();
  return {sp.x[0], sp.f[0], false};
}

}  // namespace

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<double> start, double step, double tol,
                     int max_iter) {
  NmResult r = nelder_mead_once(f, start, step, tol, max_iter);
  if (r.converged) return r;
  // One restart from a perturbed point; keep whichever did better.
  auto perturbed = r.x;
  for (auto& v : perturbed) v += 0.1 * step;
  NmResult r2 = nelder_mead_once(f, perturbed, 0.5 * step, tol, max_iter);
  return r2.value > r.value ? r2 : r;
}

NmResult2d nelder_mead_2d(const std::function<double(double, double)>& f,
                          double x0, double y0, double step, double tol,
                          int max_iter) {
  auto wrapped = [&](const std::vector<double>& v) { return f(v[0], v[1]); };
  NmResult r = nelder_mead(wrapped, {x0, y0}, step, tol, max_iter);
  return {r.x[0], r.x[1], r.value, r.converged};
}

double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double tol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa * fb > 0.0) {
    throw std::domain_error("brent_root: bracket does not change sign");
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                  0.5 * tol;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc;
        double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

// --- EM driver ---

namespace {

// Scale-aware starting point: rate from the grand mean, shapes from a coarse
// univariate fit of the max-law, theta mid-range.
BglfrpsParams default_init(const BivariateSample& s,
                           const PowerSeriesFamily& family) {
  double grand = 0.0;
  for (const auto& pr : s.pairs) grand += pr.y1 + pr.y2;
  grand /= 2.0 * s.m();
  double beta0 = 1.0 / grand;
  double gamma0 = 1e-4;
  double s_bound = family.support_bound();
  double theta0 = 0.5 * std::min(s_bound, 2.0);

  std::vector<double> maxima;
  maxima.reserve(s.pairs.size());
  for (const auto& pr : s.pairs) maxima.push_back(std::max(pr.y1, pr.y2));

  double best_shape = 1.0;
  double best_ll = -kInf;
  for (double la = -3.0; la <= 4.0; la += 0.1) {
    double shape = std::exp(la);
    GlfrpsParams mp{GlfrParams(shape, beta0, gamma0), family,
                    family.make_theta(theta0)};
    double ll = 0.0;
    for (double y : maxima) ll += glfrps_logpdf(mp, y);
    if (ll > best_ll) {
      best_ll = ll;
      best_shape = shape;
    }
  }
  double m = s.m();
  double a12 = std::max(best_shape * (s.m1() + s.m2()) / (2.0 * m), 1e-3);
  double a3 = std::max(best_shape * s.m0() / m, 1e-3);
  return BglfrpsParams{BglfrParams(a12, a12, a3, beta0, gamma0), family,
                       family.make_theta(theta0)};
}

// theta stays strictly inside (0, s) under an unconstrained coordinate:
// logit-like for finite s, plain log otherwise.
double encode_theta(double theta, double s) {
  if (std::isfinite(s)) return std::log(theta / (s - theta));
  return std::log(theta);
}

double decode_theta(double x, double s) {
  if (std::isfinite(s)) return s / (1.0 + std::exp(-x));
  return std::exp(x);
}

}  // namespace

FitReport em_fit(const BivariateSample& s, const PowerSeriesFamily& family,
                 const FitControls& controls) {
  if (s.m() < 6) {
    throw std::invalid_argument("EM fit needs at least 6 observations");
  }
  const bool degenerate = family.is_degenerate();
  const double s_bound = family.support_bound();

  BglfrpsParams params =
      controls.init ? *controls.init : default_init(s, family);
  double ll = observed_loglik(params, s);

  FitReport report{params, ll, 0, false, {ll}, s.m0(), s.m1(), s.m2(), {}};
  BglfrpsParams best = params;
  double best_ll = ll;

  for (int it = 1; it <= controls.max_iter; ++it) {
    report.iterations = it;
    EStepCache cache;
    cache.b = e_step(params, s);
    double a1 = params.base.alpha1;
    double a2 = params.base.alpha2;
    double a3 = params.base.alpha3;
    cache.u1 = a1 / (a1 + a3);
    cache.u2 = a3 / (a1 + a3);
    cache.v1 = a2 / (a2 + a3);
    cache.v2 = a3 / (a2 + a3);
    double theta_cur = params.theta.value();

    auto objective = [&](double lb, double lg) {
      double beta = std::exp(lb);
      double gamma = std::exp(lg);
      if (!std::isfinite(beta) || !std::isfinite(gamma)) return -kInf;
      try {
        return pseudo_profile_objective(beta, gamma, s, cache, family,
                                        theta_cur);
      } catch (const std::domain_error&) {
        return -kInf;
      }
    };
    NmResult2d opt = nelder_mead_2d(
        objective, std::log(params.base.beta),
        std::log(std::max(params.base.gamma, 1e-10)), 0.3, 1e-8, 500);

    double beta = std::clamp(std::exp(opt.x), kBetaLo, kBetaHi);
    double gamma = std::min(std::exp(opt.y), kGammaHi);
    if (beta == kBetaLo || beta == kBetaHi) {
      report.clamp_notes.push_back("beta clamped in iteration " +
                                   std::to_string(it));
    }

    AlphaEstimates alphas = m_step_alphas(s, cache.b, cache.u1, cache.v1,
                                          cache.u2, cache.v2, beta, gamma);
    if (alphas.floored) {
      report.clamp_notes.push_back("alpha floored in iteration " +
                                   std::to_string(it));
    }
    double na1 = std::min(alphas.alpha1, kAlphaHi);
    double na2 = std::min(alphas.alpha2, kAlphaHi);
    double na3 = std::min(alphas.alpha3, kAlphaHi);

    Theta theta = params.theta;
    if (!degenerate) {
      double b_bar =
          std::accumulate(cache.b.begin(), cache.b.end(), 0.0) / s.m();
      ThetaSolution sol = m_step_theta(family, b_bar);
      theta = sol.theta;
      if (sol.clamped) {
        report.clamp_notes.push_back("theta clamped in iteration " +
                                     std::to_string(it));
      }
    }

    params = BglfrpsParams{BglfrParams(na1, na2, na3, beta, gamma), family,
                           theta};
    double ll_new = observed_loglik(params, s);
    report.loglik_trace.push_back(ll_new);
    if (ll_new > best_ll) {
      best_ll = ll_new;
      best = params;
    }
    if (std::isfinite(ll_new) && std::isfinite(ll) &&
        std::abs(ll_new - ll) / (std::abs(ll_new) + 1.0) < controls.tol) {
      report.converged = true;
      ll = ll_new;
      break;
    }
    ll = ll_new;
  }

  if (controls.polish && std::isfinite(best_ll)) {
    std::vector<double> x = {
        std::log(best.base.alpha1), std::log(best.base.alpha2),
        std::log(best.base.alpha3), std::log(best.base.beta),
        std::log(std::max(best.base.gamma, 1e-10))};
    if (!degenerate) x.push_back(encode_theta(best.theta.value(), s_bound));

    auto decode = [&](const std::vector<double>& v) {
      double pa1 = std::clamp(std::exp(v[0]), kAlphaLo, kAlphaHi);
      double pa2 = std::clamp(std::exp(v[1]), kAlphaLo, kAlphaHi);
      double pa3 = std::clamp(std::exp(v[2]), kAlphaLo, kAlphaHi);
      double pb = std::clamp(std::exp(v[3]), kBetaLo, kBetaHi);
      double pg = std::min(std::exp(v[4]), kGammaHi);
      double th = degenerate ? best.theta.value()
                             : std::clamp(decode_theta(v[5], s_bound), 1e-8,
                                          std::isfinite(s_bound)
                                              ? s_bound * (1.0 - 1e-10)
                                              : kBetaHi * 1e6);
      return BglfrpsParams{BglfrParams(pa1, pa2, pa3, pb, pg), family,
                           family.make_theta(th)};
    };
    auto f = [&](const std::vector<double>& v) {
      try {
        return observed_loglik(decode(v), s);
      } catch (const std::domain_error&) {
        return -kInf;
      }
    };
    NmResult pr = nelder_mead(f, x, 0.2, 1e-10, 3000);
    if (pr.value > best_ll) {
      best_ll = pr.value;
      best = decode(pr.x);
      report.loglik_trace.push_back(pr.value);
    }
  }

  report.mle = best;
  report.loglik = best_ll;
  return report;
}

void write_fit_report(std::ostream& out, const FitReport& r) {
  out << "family: " << r.mle.family.name() << '\n';
  out << "alpha1: " << r.mle.base.alpha1 << '\n';
  out << "alpha2: " << r.mle.base.alpha2 << '\n';
  out << "alpha3: " << r.mle.base.alpha3 << '\n';
  out << "beta: " << r.mle.base.beta << '\n';
  out << "gamma: " << r.mle.base.gamma << '\n';
  out << "theta: " << r.mle.theta.value() << '\n';
  out << "loglik: " << r.loglik << '\n';
  out << "converged: " << (r.converged ? "true" : "false") << '\n';
  out << "iterations: " << r.iterations << '\n';
  out << "m0: " << r.m0 << '\n';
  out << "m1: " << r.m1 << '\n';
  out << "m2: " << r.m2 << '\n';
  for (const auto& note : r.clamp_notes) out << "clamp: " << note << '\n';
  out << "trace:";
  for (double v : r.loglik_trace) out << ' ' << v;
  out << '\n';
}

}  // namespace bglfrps
