#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "techevo/errors.hpp"
#include "techevo/series.hpp"

namespace techevo {

namespace detail {

/// Shortest fixed-precision form that round-trips a double: 17 significant
/// digits, C locale, used for every numeric file the tool emits.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

inline bool parse_double(std::string_view cell, double& out) {
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !cell.empty();
}

}  // namespace detail

/// Reads a headered, comma-delimited CSV into a TimeSeries. The header must
/// name both requested columns; cells use "." as decimal separator. Rows are
/// sorted by time; duplicate times and non-positive values are errors, with
/// the 1-based file line in the message.
inline TimeSeries parse_csv(const std::string& path,
                            const std::string& time_col = "year",
                            const std::string& value_col = "value") {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::invalid_config, "cannot open CSV file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);  // UTF-8 BOM

  std::vector<std::string_view> lines;
  {
    std::string_view rest = text;
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      lines.push_back(rest.substr(0, nl));
      if (nl == std::string_view::npos) break;
      rest = rest.substr(nl + 1);
    }
  }

  std::size_t header_line = 0;
  while (header_line < lines.size() && detail::trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size())
    fail(errc::missing_column, "file '" + path + "' is empty, no header row");

  const auto header = detail::split_fields(lines[header_line]);
  std::size_t time_idx = header.size(), value_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == time_col) time_idx = i;
    if (header[i] == value_col) value_idx = i;
  }
  if (time_idx == header.size())
    fail(errc::missing_column, "column '" + time_col + "' not found in '" + path + "'");
  if (value_idx == header.size())
    fail(errc::missing_column, "column '" + value_col + "' not found in '" + path + "'");

  std::vector<TimePoint> points;
  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    if (detail::trim(lines[li]).empty()) continue;
    const std::string row = std::to_string(li + 1);  // 1-based file line
    const auto fields = detail::split_fields(lines[li]);
    if (fields.size() <= std::max(time_idx, value_idx))
      fail(errc::non_numeric_cell, "row " + row + " of '" + path + "' has too few columns");
    double t = 0.0, v = 0.0;
    if (!detail::parse_double(fields[time_idx], t))
      fail(errc::non_numeric_cell, "row " + row + " of '" + path + "': '" +
                                       std::string(fields[time_idx]) + "' is not a number");
    if (!detail::parse_double(fields[value_idx], v))
      fail(errc::non_numeric_cell, "row " + row + " of '" + path + "': '" +
                                       std::string(fields[value_idx]) + "' is not a number");
    if (v <= 0.0)
      fail(errc::non_positive_value, "row " + row + " of '" + path + "': value " +
                                         detail::g17(v) + " at time " + detail::g17(t) +
                                         " must be positive");
    points.push_back({t, v});
  }
  return TimeSeries(value_col, "", std::move(points));
}

inline void write_csv(std::ostream& out, const TimeSeries& s,
                      const std::string& time_col = "year",
                      const std::string& value_col = "value") {
  out << time_col << ',' << value_col << '\n';
  for (std::size_t i = 0; i < s.size(); ++i)
    out << detail::g17(s.times()[i]) << ',' << detail::g17(s.values()[i]) << '\n';
}

inline void write_csv(const std::string& path, const TimeSeries& s,
                      const std::string& time_col = "year",
                      const std::string& value_col = "value") {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::invalid_config, "cannot write CSV file '" + path + "'");
  write_csv(out, s, time_col, value_col);
}

}  // namespace techevo
