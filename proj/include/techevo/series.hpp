#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "techevo/errors.hpp"

namespace techevo {

struct TimePoint {
  double time;
  double value;
};

/// One technology performance metric sampled over calendar time.
///
/// Construction sorts points by time and rejects duplicate times and
/// series shorter than 3 points. Values may be any finite real: raw
/// metric series are positive by the ingestion contract (csv.hpp), but
/// log-transformed series legitimately carry non-positive values, so
/// positivity is enforced where an operation actually needs it.
class TimeSeries {
 public:
  TimeSeries(std::string name, std::string units, std::vector<TimePoint> points)
      : name_(std::move(name)), units_(std::move(units)) {
    if (points.size() < kMinPoints)
      fail(errc::insufficient_data,
           "series '" + name_ + "' has " + std::to_string(points.size()) +
               " points, need at least " + std::to_string(kMinPoints));
    std::stable_sort(points.begin(), points.end(),
                     [](const TimePoint& a, const TimePoint& b) { return a.time < b.time; });
    times_.reserve(points.size());
    values_.reserve(points.size());
    for (const TimePoint& p : points) {
      if (!std::isfinite(p.time) || !std::isfinite(p.value))
        fail(errc::non_numeric_cell, "series '" + name_ + "' has a non-finite point");
      if (!times_.empty() && p.time == times_.back())
        fail(errc::duplicate_time,
             "series '" + name_ + "' has duplicate time " + std::to_string(p.time));
      times_.push_back(p.time);
      values_.push_back(p.value);
    }
  }

  static constexpr std::size_t kMinPoints = 3;

  const std::string& name() const noexcept { return name_; }
  const std::string& units() const noexcept { return units_; }
  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  TimePoint point(std::size_t i) const { return {times_[i], values_[i]}; }

  double max_value() const { return *std::max_element(values_.begin(), values_.end()); }
  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }

  bool all_positive() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
  }

  std::vector<TimePoint> points() const {
    std::vector<TimePoint> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back({times_[i], values_[i]});
    return out;
  }

 private:
  std::string name_;
  std::string units_;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Host series H and subsystem series P restricted to common times.
class PairedSeries {
 public:
  PairedSeries(TimeSeries host, TimeSeries sub)
      : host_(std::move(host)), sub_(std::move(sub)) {
    if (host_.times() != sub_.times())
      fail(errc::length_mismatch, "host and subsystem series are not aligned on the same times");
    if (host_.size() < kMinPairs)
      fail(errc::insufficient_overlap,
           "paired series has " + std::to_string(host_.size()) + " common times, need at least " +
               std::to_string(kMinPairs));
  }

  static constexpr std::size_t kMinPairs = 4;

  const TimeSeries& host() const noexcept { return host_; }
  const TimeSeries& sub() const noexcept { return sub_; }
  const std::vector<double>& times() const noexcept { return host_.times(); }
  std::size_t size() const noexcept { return host_.size(); }

 private:
  TimeSeries host_;
  TimeSeries sub_;
};

/// Restricts both series to their common times (exact matches). Times
/// present on only one side are dropped, never interpolated.
inline PairedSeries align(const TimeSeries& host, const TimeSeries& sub) {
  std::vector<TimePoint> h, s;
  std::size_t i = 0, j = 0;
  while (i < host.size() && j < sub.size()) {
    const double th = host.times()[i], ts = sub.times()[j];
    if (th == ts) {
      h.push_back(host.point(i));
      s.push_back(sub.point(j));
      ++i;
      ++j;
    } else if (th < ts) {
      ++i;
    } else {
      ++j;
    }
  }
  if (h.size() < PairedSeries::kMinPairs)
    fail(errc::insufficient_overlap,
         "only " + std::to_string(h.size()) + " common times between '" + host.name() +
             "' and '" + sub.name() + "', need at least " +
             std::to_string(PairedSeries::kMinPairs));
  return PairedSeries(TimeSeries(host.name(), host.units(), std::move(h)),
                      TimeSeries(sub.name(), sub.units(), std::move(s)));
}

/// Natural log of every value; the result is named "LN <name>".
inline TimeSeries log_transform(const TimeSeries& s) {
  std::vector<TimePoint> pts;
  pts.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.values()[i];
    if (v <= 0.0)
      fail(errc::non_positive_value,
           "series '" + s.name() + "' has non-positive value " + std::to_string(v) +
               " at time " + std::to_string(s.times()[i]) + "; log undefined");
    pts.push_back({s.times()[i], std::log(v)});
  }
  return TimeSeries("LN " + s.name(), s.units(), std::move(pts));
}

}  // namespace techevo
