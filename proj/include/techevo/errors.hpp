#pragma once

#include <stdexcept>
#include <string>

namespace techevo {

/// Error categories raised by the library. Each maps to a CLI exit code
/// (see cli.hpp): data/usage problems exit 2, fitting problems exit 3.
enum class errc {
  missing_column,
  non_numeric_cell,
  non_positive_value,
  duplicate_time,
  insufficient_data,
  insufficient_overlap,
  degenerate_sample,
  constant_regressor,
  length_mismatch,
  k_too_small,
  search_failure,
  degenerate_noise,
  invalid_count,
  invalid_duration,
  too_few_components,
  invalid_config,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::missing_column: return "missing_column";
    case errc::non_numeric_cell: return "non_numeric_cell";
    case errc::non_positive_value: return "non_positive_value";
    case errc::duplicate_time: return "duplicate_time";
    case errc::insufficient_data: return "insufficient_data";
    case errc::insufficient_overlap: return "insufficient_overlap";
    case errc::degenerate_sample: return "degenerate_sample";
    case errc::constant_regressor: return "constant_regressor";
    case errc::length_mismatch: return "length_mismatch";
    case errc::k_too_small: return "k_too_small";
    case errc::search_failure: return "search_failure";
    case errc::degenerate_noise: return "degenerate_noise";
    case errc::invalid_count: return "invalid_count";
    case errc::invalid_duration: return "invalid_duration";
    case errc::too_few_components: return "too_few_components";
    case errc::invalid_config: return "invalid_config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace techevo
