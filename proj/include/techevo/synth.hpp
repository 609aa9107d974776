#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "techevo/csv.hpp"
#include "techevo/errors.hpp"
#include "techevo/evolution.hpp"
#include "techevo/series.hpp"
#include "techevo/sigmoid.hpp"

namespace techevo {

/// SplitMix64: a 64-bit counter-based generator (Steele, Lea & Flood,
/// "Fast splittable pseudorandom number generators"). Chosen because the
/// whole algorithm fits in four lines, so a sequence is reproducible from
/// the seed in any language:
///   state += 0x9E3779B97F4A7C15
///   z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
///   z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0,1]: top 53 bits, shifted away from 0 so logarithms
  /// in the gaussian transform stay finite.
  double next_unit() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal via Box–Muller; consumes exactly two uniforms per
  /// draw (no caching of the paired deviate) so draw counts are easy to
  /// reason about when reproducing sequences.
  double next_gaussian() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  std::uint64_t state_;
};

/// Parameters of a synthetic host/subsystem logistic pair with known
/// ground truth: true_B = b_sub/b_host by construction.
struct SynthConfig {
  double K_host = 100.0;
  double K_sub = 100.0;
  double a_host = 5.0;
  double a_sub = 5.0;
  double b_host = 0.3;
  double b_sub = 0.3;
  double t_start = 0.0;
  double t_end = 10.0;
  double t_step = 1.0;
  double noise_sd = 0.0;
  std::uint64_t seed = 1;
  EvolutionMode mode = EvolutionMode::reduced;  // estimator used by recovery_sweep

  double true_B() const { return b_sub / b_host; }

  void validate() const {
    if (!(K_host > 0.0) || !(K_sub > 0.0))
      fail(errc::invalid_config, "asymptotes K_host and K_sub must be positive");
    if (b_host == 0.0) fail(errc::invalid_config, "b_host must be nonzero so true_B is defined");
    if (!(t_end > t_start)) fail(errc::invalid_config, "t_end must exceed t_start");
    if (!(t_step > 0.0)) fail(errc::invalid_config, "t_step must be positive");
    if (!(noise_sd >= 0.0)) fail(errc::invalid_config, "noise_sd must be non-negative");
  }
};

namespace detail {

inline std::vector<double> sample_grid(const SynthConfig& cfg) {
  std::vector<double> ts;
  // Half-step slack so accumulated rounding cannot drop the final point.
  for (double t = cfg.t_start; t <= cfg.t_end + 1e-9 * cfg.t_step; t += cfg.t_step)
    ts.push_back(t);
  return ts;
}

inline double noisy_positive(double clean, double sd, SplitMix64& rng) {
  if (sd == 0.0) return clean;
  for (int tries = 0; tries < 100; ++tries) {
    const double v = clean + sd * rng.next_gaussian();
    if (v > 0.0) return v;
  }
  fail(errc::degenerate_noise, "could not draw a positive value around " + std::to_string(clean) +
                                   " with noise sd " + std::to_string(sd) +
                                   " in 100 attempts");
}

}  // namespace detail

/// Samples both logistic curves on the configured grid, adds independent
/// Gaussian noise, and redraws any non-positive value (up to 100 attempts
/// per point). One generator seeded from cfg.seed serves the whole pair;
/// all host points are drawn before all subsystem points, so output is a
/// pure function of the config.
inline PairedSeries generate_pair(const SynthConfig& cfg) {
  cfg.validate();
  const std::vector<double> ts = detail::sample_grid(cfg);
  SplitMix64 rng(cfg.seed);

  std::vector<TimePoint> host, sub;
  host.reserve(ts.size());
  sub.reserve(ts.size());
  for (double t : ts)
    host.push_back({t, detail::noisy_positive(logistic_value(cfg.K_host, cfg.a_host, cfg.b_host, t),
                                              cfg.noise_sd, rng)});
  for (double t : ts)
    sub.push_back({t, detail::noisy_positive(logistic_value(cfg.K_sub, cfg.a_sub, cfg.b_sub, t),
                                             cfg.noise_sd, rng)});

  return PairedSeries(TimeSeries("host", "", std::move(host)),
                      TimeSeries("sub", "", std::move(sub)));
}

struct SweepRow {
  double true_B = 0.0;
  double median_B = 0.0;
  double median_abs_error = 0.0;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Monte-Carlo recovery table: for each config, run `replicates`
/// estimations on freshly generated pairs and report the median estimate
/// of B and the median absolute error against the config's ground truth.
/// Replicate seeds are cfg.seed + running index over (config, replicate)
/// pairs, so the whole sweep is reproducible from the configs alone.
inline std::vector<SweepRow> recovery_sweep(const std::vector<SynthConfig>& grid, int replicates) {
  if (replicates < 1) fail(errc::invalid_config, "replicates must be at least 1");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  std::uint64_t run_index = 0;
  for (const SynthConfig& base : grid) {
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(replicates));
    for (int r = 0; r < replicates; ++r, ++run_index) {
      SynthConfig cfg = base;
      cfg.seed = base.seed + run_index;
      const PairedSeries pair = generate_pair(cfg);
      const EvolutionResult est = cfg.mode == EvolutionMode::exact
                                      ? estimate_evolution_exact(pair)
                                      : estimate_evolution(pair);
      estimates.push_back(est.B);
    }
    std::vector<double> errors(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i)
      errors[i] = std::fabs(estimates[i] - base.true_B());
    rows.push_back({base.true_B(), detail::median(estimates), detail::median(errors)});
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "true_B,median_B,median_abs_error\n";
  for (const SweepRow& r : rows)
    out << detail::g17(r.true_B) << ',' << detail::g17(r.median_B) << ','
        << detail::g17(r.median_abs_error) << '\n';
}

/// Sweep description as a plain key=value file. '#' starts a comment.
/// Numeric keys: K_host K_sub a_host a_sub b_host b_sub t_start t_end
/// t_step noise_sd seed replicates; mode is reduced|exact; true_B_grid is
/// a comma-separated list that expands the file into one config per entry
/// (b_sub = b_host·true_B), otherwise the single explicit b_sub is used.
struct SweepSpec {
  std::vector<SynthConfig> grid;
  int replicates = 1;
};

inline SweepSpec load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::invalid_config, "cannot open config file '" + path + "'");

  SynthConfig base;
  std::vector<double> true_b_grid;
  int replicates = 1;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      fail(errc::invalid_config, "line " + std::to_string(line_no) + " of '" + path +
                                     "' is not key=value");
    const std::string key{detail::trim(body.substr(0, eq))};
    const std::string val{detail::trim(body.substr(eq + 1))};
    const std::string where = "line " + std::to_string(line_no) + " of '" + path + "'";

    auto as_double = [&](const std::string& s) {
      double d = 0.0;
      if (!detail::parse_double(s, d))
        fail(errc::invalid_config, where + ": '" + s + "' is not a number");
      return d;
    };

    if (key == "K_host") base.K_host = as_double(val);
    else if (key == "K_sub") base.K_sub = as_double(val);
    else if (key == "a_host") base.a_host = as_double(val);
    else if (key == "a_sub") base.a_sub = as_double(val);
    else if (key == "b_host") base.b_host = as_double(val);
    else if (key == "b_sub") base.b_sub = as_double(val);
    else if (key == "t_start") base.t_start = as_double(val);
    else if (key == "t_end") base.t_end = as_double(val);
    else if (key == "t_step") base.t_step = as_double(val);
    else if (key == "noise_sd") base.noise_sd = as_double(val);
    else if (key == "seed") base.seed = static_cast<std::uint64_t>(as_double(val));
    else if (key == "replicates") replicates = static_cast<int>(as_double(val));
    else if (key == "mode") {
      if (val == "reduced") base.mode = EvolutionMode::reduced;
      else if (val == "exact") base.mode = EvolutionMode::exact;
      else fail(errc::invalid_config, where + ": mode must be reduced or exact, got '" + val + "'");
    } else if (key == "true_B_grid") {
      std::stringstream ss{val};
      std::string item;
      while (std::getline(ss, item, ','))
        true_b_grid.push_back(as_double(std::string{detail::trim(item)}));
      if (true_b_grid.empty()) fail(errc::invalid_config, where + ": true_B_grid is empty");
    } else {
      fail(errc::invalid_config, where + ": unknown key '" + key + "'");
    }
  }

  SweepSpec spec;
  spec.replicates = replicates;
  if (true_b_grid.empty()) {
    base.validate();
    spec.grid.push_back(base);
  } else {
    for (double tb : true_b_grid) {
      SynthConfig cfg = base;
      cfg.b_sub = base.b_host * tb;
      cfg.validate();
      spec.grid.push_back(cfg);
    }
  }
  return spec;
}

}  // namespace techevo
