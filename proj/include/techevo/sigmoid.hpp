#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "techevo/errors.hpp"
#include "techevo/regress.hpp"
#include "techevo/series.hpp"

namespace techevo {

/// Three-parameter logistic curve K/(1+exp(a−bt)): K is the equilibrium
/// level (asymptote), a locates the curve, b is the growth rate per time
/// unit. Inflection at t = a/b, where the value is exactly K/2.
struct LogisticFit {
  double K = 0.0;
  double a = 0.0;
  double b = 0.0;
  double sse = 0.0;             // in original value units
  double inflection_time = 0.0;  // a/b
  bool converged = false;
};

inline double logistic_value(double K, double a, double b, double t) {
  return K / (1.0 + std::exp(a - b * t));
}

/// Maps each value v to ln((K−v)/v), the transform that turns an exact
/// logistic of asymptote K into the straight line a − b·t.
inline std::vector<TimePoint> logit_series(const TimeSeries& s, double K) {
  std::vector<TimePoint> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.values()[i];
    if (v <= 0.0)
      fail(errc::non_positive_value, "series '" + s.name() + "' has non-positive value " +
                                         std::to_string(v) + "; logit undefined");
    if (v >= K)
      fail(errc::k_too_small, "value " + std::to_string(v) + " at time " +
                                  std::to_string(s.times()[i]) + " is not below the asymptote " +
                                  std::to_string(K));
    out.push_back({s.times()[i], std::log((K - v) / v)});
  }
  return out;
}

namespace detail {

struct ProfilePoint {
  double K = 0.0;
  double a = 0.0;
  double b = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

/// Conditional fit for a fixed asymptote: regress the logit transform on
/// time (intercept a, slope −b), then score the implied curve by its sum
/// of squared errors in the original value space.
inline ProfilePoint profile_at(const TimeSeries& s, double K) {
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = std::log((K - s.values()[i]) / s.values()[i]);
  const OlsFit line = ols(s.times(), w);
  ProfilePoint p;
  p.K = K;
  p.a = line.intercept;
  p.b = -line.slope;
  double sse = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = s.values()[i] - logistic_value(K, p.a, p.b, s.times()[i]);
    sse += r * r;
  }
  p.sse = sse;
  return p;
}

}  // namespace detail

/// Fits the logistic by a profile search over the asymptote: for each
/// candidate K the remaining parameters reduce to a straight-line fit of
/// the logit transform, so the problem is one-dimensional in K. Candidates
/// range over (max·(1+1e−6), max·10]; a 64-point geometric scan brackets
/// the minimum, then golden-section refines it to 1e−8 relative tolerance
/// (at most 200 iterations). The best candidate seen anywhere is returned,
/// which also guarantees the fit scores no worse than the fixed reference
/// candidate K = 2·max.
inline LogisticFit fit_logistic(const TimeSeries& s) {
  if (s.size() < 4)
    fail(errc::insufficient_data, "logistic fit needs at least 4 points, got " +
                                      std::to_string(s.size()));
  if (!s.all_positive())
    fail(errc::non_positive_value,
         "series '" + s.name() + "' has non-positive values; logistic fit undefined");

  const double vmax = s.max_value();
  const double lo = vmax * (1.0 + 1e-6);
  const double hi = vmax * 10.0;

  detail::ProfilePoint best;
  auto probe = [&](double K) {
    const detail::ProfilePoint p = detail::profile_at(s, K);
    if (p.sse < best.sse) best = p;
    return p.sse;
  };

  // Geometric scan of the admissible range; K = 2·max is re-probed exactly
  // so the reference-candidate guarantee cannot be lost to grid placement.
  constexpr int kGrid = 64;
  std::vector<double> grid_k(kGrid);
  std::vector<double> grid_sse(kGrid);
  const double ratio = hi / lo;
  for (int j = 0; j < kGrid; ++j) {
    grid_k[j] = lo * std::pow(ratio, static_cast<double>(j) / (kGrid - 1));
    grid_sse[j] = probe(grid_k[j]);
  }
  probe(2.0 * vmax);

  int best_j = 0;
  for (int j = 1; j < kGrid; ++j)
    if (grid_sse[j] < grid_sse[best_j]) best_j = j;

  double a_end = grid_k[best_j > 0 ? best_j - 1 : 0];
  double b_end = grid_k[best_j + 1 < kGrid ? best_j + 1 : kGrid - 1];

  // Golden-section refinement inside the bracketing grid cell pair.
  constexpr double kInvPhi = 0.6180339887498949;
  constexpr double kRelTol = 1e-8;
  constexpr int kMaxIter = 200;
  double x1 = b_end - kInvPhi * (b_end - a_end);
  double x2 = a_end + kInvPhi * (b_end - a_end);
  double f1 = probe(x1);
  double f2 = probe(x2);
  bool converged = false;
  for (int it = 0; it < kMaxIter; ++it) {
    if (b_end - a_end <= kRelTol * 0.5 * (a_end + b_end)) {
      converged = true;
      break;
    }
    if (f1 < f2) {
      b_end = x2;
      x2 = x1;
      f2 = f1;
      x1 = b_end - kInvPhi * (b_end - a_end);
      f1 = probe(x1);
    } else {
      a_end = x1;
      x1 = x2;
      f1 = f2;
      x2 = a_end + kInvPhi * (b_end - a_end);
      f2 = probe(x2);
    }
  }

  if (!std::isfinite(best.sse))
    fail(errc::search_failure,
         "no admissible asymptote between " + std::to_string(lo) + " and " + std::to_string(hi));

  LogisticFit fit;
  fit.K = best.K;
  fit.a = best.a;
  fit.b = best.b;
  fit.sse = best.sse;
  fit.inflection_time = best.a / best.b;
  fit.converged = converged;
  return fit;
}

}  // namespace techevo
