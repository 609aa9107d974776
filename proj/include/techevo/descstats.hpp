#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "techevo/errors.hpp"
#include "techevo/series.hpp"

namespace techevo {

/// Sample moments under the SPSS/Excel conventions: sd uses the n−1
/// denominator, skewness and kurtosis are the bias-adjusted estimators,
/// kurtosis is excess (normal sample → ~0).
struct DescriptiveSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

/// Computes bias-adjusted sample moments:
///   sd       = sqrt(Σ(x−x̄)² / (n−1))
///   skewness = n/((n−1)(n−2)) · Σz³          with z = (x−x̄)/sd
///   kurtosis = n(n+1)/((n−1)(n−2)(n−3)) · Σz⁴ − 3(n−1)²/((n−2)(n−3))
/// Requires n ≥ 4 (the kurtosis formula needs n > 3) and a non-constant
/// sample (zero variance makes the standardized moments undefined).
inline DescriptiveSummary summarize(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 4)
    fail(errc::insufficient_data,
         "descriptive moments need at least 4 values, got " + std::to_string(n));

  double lo = xs[0], hi = xs[0], sum = 0.0;
  for (double x : xs) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
  }
  // Exact-equality check: floating-point cancellation can make a computed
  // variance tiny-but-nonzero on a constant sample, or zero on a nearly
  // constant one; min==max is the unambiguous degeneracy test.
  if (lo == hi)
    fail(errc::degenerate_sample, "all " + std::to_string(n) +
                                      " values equal " + std::to_string(lo) +
                                      "; moments beyond the mean are undefined");

  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  double m2 = 0.0;
  for (double x : xs) m2 += (x - mean) * (x - mean);
  const double sd = std::sqrt(m2 / (nd - 1.0));

  double s3 = 0.0, s4 = 0.0;
  for (double x : xs) {
    const double z = (x - mean) / sd;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  const double skew = nd / ((nd - 1.0) * (nd - 2.0)) * s3;
  const double kurt = nd * (nd + 1.0) / ((nd - 1.0) * (nd - 2.0) * (nd - 3.0)) * s4 -
                      3.0 * (nd - 1.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));

  return {n, mean, sd, skew, kurt};
}

inline DescriptiveSummary summarize(const TimeSeries& s) { return summarize(std::span(s.values())); }

}  // namespace techevo
