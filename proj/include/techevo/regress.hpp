#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "techevo/errors.hpp"

namespace techevo {

namespace detail {

/// Continued-fraction core of the regularized incomplete beta function
/// (modified Lentz's method). Converges for x < (a+1)/(a+b+2).
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 200;
  constexpr double kEps = 1e-12;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double md = static_cast<double>(m);
    const double m2 = 2.0 * md;
    double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b) for a,b > 0, x ∈ [0,1].
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
  return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

/// CDF of Student's t with df degrees of freedom.
inline double t_cdf(double t, int df) {
  if (df < 1) fail(errc::invalid_config, "t distribution needs df >= 1");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  const double d = static_cast<double>(df);
  const double x = d / (d + t * t);
  const double half_tail = 0.5 * regularized_incomplete_beta(d / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

/// Two-sided p-value of a t statistic against t(df).
inline double two_sided_p(double t, int df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * (1.0 - t_cdf(std::fabs(t), df));
}

/// CDF of the F distribution with (df1, df2) degrees of freedom.
inline double f_cdf(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1) fail(errc::invalid_config, "F distribution needs df1, df2 >= 1");
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0.0) return 0.0;
  if (std::isinf(f)) return 1.0;
  const double d1 = static_cast<double>(df1);
  const double d2 = static_cast<double>(df2);
  return regularized_incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2));
}

/// Report annotation: *** p<0.01, ** p<0.05, * p<0.10, blank otherwise.
inline const char* significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

/// Simple-regression estimate with the full inference set: coefficient
/// standard errors, t and p of the slope, R², adjusted R² (one regressor),
/// the regression F statistic and its p-value, and the standard error of
/// the estimate. A perfect fit (SSE = 0) yields infinite t and F with
/// p-values of 0.
struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double se_slope = 0.0;
  double se_intercept = 0.0;
  double t_slope = 0.0;
  double p_slope = 1.0;
  double r2 = 0.0;
  double r2_adj = 0.0;
  double f_stat = 0.0;
  double p_f = 1.0;
  double resid_se = 0.0;
  std::size_t n = 0;
  std::vector<double> residuals;
};

/// Ordinary least squares of y on x with an intercept. Needs n ≥ 3 so the
/// residual degrees of freedom n−2 are positive, and a non-constant x.
inline OlsFit ols(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size())
    fail(errc::length_mismatch, "regressor has " + std::to_string(n) + " values, response has " +
                                    std::to_string(y.size()));
  if (n < 3)
    fail(errc::insufficient_data,
         "regression needs at least 3 points for n-2 residual degrees of freedom, got " +
             std::to_string(n));

  const double nd = static_cast<double>(n);
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= nd;
  ybar /= nd;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - xbar;
    const double dy = y[i] - ybar;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) fail(errc::constant_regressor, "regressor is constant; slope undefined");

  OlsFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;

  fit.residuals.resize(n);
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.residuals[i] = r;
    sse += r * r;
  }

  const int df = static_cast<int>(n) - 2;
  fit.resid_se = std::sqrt(sse / df);
  fit.se_slope = fit.resid_se / std::sqrt(sxx);
  fit.se_intercept = fit.resid_se * std::sqrt(1.0 / nd + xbar * xbar / sxx);

  if (syy > 0.0) {
    fit.r2 = 1.0 - sse / syy;
    fit.r2 = std::min(1.0, std::max(0.0, fit.r2));  // guard FP drift at the ends
  } else {
    fit.r2 = 1.0;  // constant y fitted exactly by the intercept
  }
  fit.r2_adj = 1.0 - (1.0 - fit.r2) * (nd - 1.0) / (nd - 2.0);

  if (sse > 0.0) {
    fit.t_slope = fit.slope / fit.se_slope;
    fit.p_slope = two_sided_p(fit.t_slope, df);
    fit.f_stat = (syy - sse) / (sse / df);
    fit.f_stat = std::max(0.0, fit.f_stat);
    // For one regressor the F test and the slope t test are the same test;
    // reporting the same p avoids a second continued-fraction round-off.
    fit.p_f = fit.p_slope;
  } else if (fit.slope != 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    fit.t_slope = fit.slope > 0.0 ? inf : -inf;
    fit.p_slope = 0.0;
    fit.f_stat = inf;
    fit.p_f = 0.0;
  } else {
    // Constant y fitted exactly by the intercept: zero slope with zero
    // residual variance carries no evidence of association.
    fit.t_slope = 0.0;
    fit.p_slope = 1.0;
    fit.f_stat = 0.0;
    fit.p_f = 1.0;
  }
  return fit;
}

}  // namespace techevo
