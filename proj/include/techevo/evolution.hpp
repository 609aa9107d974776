#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "techevo/errors.hpp"
#include "techevo/regress.hpp"
#include "techevo/series.hpp"
#include "techevo/sigmoid.hpp"

namespace techevo {

/// How B is estimated: `reduced` regresses ln P on ln H (valid when both
/// series are far below their asymptotes), `exact` regresses the logit
/// transforms using fitted asymptotes (valid on any window).
enum class EvolutionMode { reduced, exact };

inline const char* to_string(EvolutionMode m) {
  return m == EvolutionMode::reduced ? "reduced" : "exact";
}

/// Descriptive label for how a subsystem and its host interact. Signature
/// is (effect on subsystem, effect on host). The label is user-supplied
/// metadata for reports; nothing here infers it from data.
enum class InteractionType {
  parasitism,    // (+,−)
  commensalism,  // (+,0)
  mutualism,     // (+,+)
  symbiosis,     // (++,++)
};

inline const char* to_string(InteractionType t) {
  switch (t) {
    case InteractionType::parasitism: return "parasitism";
    case InteractionType::commensalism: return "commensalism";
    case InteractionType::mutualism: return "mutualism";
    case InteractionType::symbiosis: return "symbiosis";
  }
  return "unknown";
}

struct Grade {
  int grade = 2;  // 1, 2, or 3
  const char* stage = "";
  const char* prediction = "";
};

/// Classifies the evolution grade from the estimated coefficient B:
///   grade 1 (Underdevelopment)  B significantly below 1
///   grade 2 (Growth)            B not significantly different from 1
///   grade 3 (Development)       B significantly above 1
/// Significance is the two-sided t test of B = 1 with n−2 degrees of
/// freedom at level alpha. A degenerate standard error (se_B ≤ 1e−9, as
/// produced by exact power-law data) falls back to point classification
/// with a 1e−9 band around 1.
inline Grade classify_grade(double B, double se_B, std::size_t n, double alpha = 0.05) {
  if (!(se_B >= 0.0))
    fail(errc::invalid_config, "standard error of B must be non-negative");
  if (n < 4)
    fail(errc::insufficient_data,
         "grade classification needs n >= 4, got " + std::to_string(n));
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(errc::invalid_config, "alpha must be in (0,1)");

  constexpr double kDegenerate = 1e-9;
  bool above = false, below = false;
  if (se_B <= kDegenerate) {
    above = B > 1.0 + kDegenerate;
    below = B < 1.0 - kDegenerate;
  } else {
    const double t = (B - 1.0) / se_B;
    const double p = two_sided_p(t, static_cast<int>(n) - 2);
    above = p < alpha && B > 1.0;
    below = p < alpha && B < 1.0;
  }

  if (above)
    return {3, "Development", "Technologies are likeliest to evolve rapidly"};
  if (below)
    return {1, "Underdevelopment", "Technologies improve slowly over the course of time"};
  return {2, "Growth", "Technologies have a steady-state path of evolution"};
}

/// Estimated evolutionary coefficient of growth B for a subsystem P
/// relative to its host H, with the regression it came from and the
/// grade classification.
struct EvolutionResult {
  double B = 0.0;      // growth of P relative to H
  double se_B = 0.0;
  double lnA = 0.0;    // intercept of ln P = ln A + B ln H
  double se_lnA = 0.0;
  OlsFit fit;          // the underlying straight-line regression
  int grade = 2;
  std::string stage;
  std::string prediction;
  EvolutionMode mode = EvolutionMode::reduced;
  bool small_value_warning = false;
};

namespace detail {

inline bool beyond_half_asymptote(const TimeSeries& s, const LogisticFit& f) {
  return s.max_value() > 0.5 * f.K;
}

inline void apply_grade(EvolutionResult& r, std::size_t n, double alpha) {
  const Grade g = classify_grade(r.B, r.se_B, n, alpha);
  r.grade = g.grade;
  r.stage = g.stage;
  r.prediction = g.prediction;
}

}  // namespace detail

/// Log-log estimate: regress ln P on ln H; the slope is B and the
/// intercept ln A of the power law P = A·H^B. This is the small-value
/// reduction of the logistic pair, so the result carries a warning when
/// either series has climbed beyond 50% of its fitted asymptote. The
/// overload taking precomputed logistic fits skips refitting them.
inline EvolutionResult estimate_evolution(const PairedSeries& p, const LogisticFit& host_fit,
                                          const LogisticFit& sub_fit, double alpha = 0.05) {
  const TimeSeries ln_host = log_transform(p.host());
  const TimeSeries ln_sub = log_transform(p.sub());

  EvolutionResult r;
  r.fit = ols(ln_host.values(), ln_sub.values());
  r.B = r.fit.slope;
  r.se_B = r.fit.se_slope;
  r.lnA = r.fit.intercept;
  r.se_lnA = r.fit.se_intercept;
  r.mode = EvolutionMode::reduced;
  r.small_value_warning = detail::beyond_half_asymptote(p.host(), host_fit) ||
                          detail::beyond_half_asymptote(p.sub(), sub_fit);
  detail::apply_grade(r, p.size(), alpha);
  return r;
}

inline EvolutionResult estimate_evolution(const PairedSeries& p, double alpha = 0.05) {
  return estimate_evolution(p, fit_logistic(p.host()), fit_logistic(p.sub()), alpha);
}

/// Exact estimate valid on any sampling window: with fitted asymptotes
/// K_H and K_P, the logit transforms obey
///   ln(H/(K_H−H)) = ln C + (b_H/b_P)·ln(P/(K_P−P))
/// exactly for logistic trajectories. The fitted slope m = b_H/b_P is
/// inverted to the subsystem-relative-to-host orientation, B = 1/m, with
/// the delta-method standard error se_B = se_m/m². The power-law
/// intercept follows as ln A = ln K_P − B·(ln K_H + ln C).
inline EvolutionResult estimate_evolution_exact(const PairedSeries& p,
                                                const LogisticFit& host_fit,
                                                const LogisticFit& sub_fit, double alpha = 0.05) {
  std::vector<double> x(p.size()), y(p.size());
  const std::vector<TimePoint> sub_logit = logit_series(p.sub(), sub_fit.K);
  const std::vector<TimePoint> host_logit = logit_series(p.host(), host_fit.K);
  for (std::size_t i = 0; i < p.size(); ++i) {
    // logit_series returns ln((K−v)/v); the relation above uses ln(v/(K−v)).
    x[i] = -sub_logit[i].value;
    y[i] = -host_logit[i].value;
  }

  EvolutionResult r;
  r.fit = ols(x, y);
  const double m = r.fit.slope;
  if (m == 0.0)
    fail(errc::search_failure, "logit-logit slope is zero; B = 1/slope undefined");
  r.B = 1.0 / m;
  r.se_B = r.fit.se_slope / (m * m);
  r.lnA = std::log(sub_fit.K) - r.B * (std::log(host_fit.K) + r.fit.intercept);
  // First-order only: treats the slope as fixed when propagating the
  // intercept uncertainty; good enough for a display diagnostic.
  r.se_lnA = std::fabs(r.B) * r.fit.se_intercept;
  r.mode = EvolutionMode::exact;
  r.small_value_warning = detail::beyond_half_asymptote(p.host(), host_fit) ||
                          detail::beyond_half_asymptote(p.sub(), sub_fit);
  detail::apply_grade(r, p.size(), alpha);
  return r;
}

inline EvolutionResult estimate_evolution_exact(const PairedSeries& p, double alpha = 0.05) {
  return estimate_evolution_exact(p, fit_logistic(p.host()), fit_logistic(p.sub()), alpha);
}

}  // namespace techevo
