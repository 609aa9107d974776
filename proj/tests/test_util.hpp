#pragma once

// Shared helpers for the test binaries: scratch-file management under the
// system temp directory and error-code capture for exception assertions.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "techevo/errors.hpp"

namespace testutil {

inline std::filesystem::path temp_dir() {
  const auto d = std::filesystem::temp_directory_path() / "techevo_tests";
  std::filesystem::create_directories(d);
  return d;
}

inline std::string write_file(const std::string& name, const std::string& content) {
  const auto p = temp_dir() / name;
  std::ofstream f(p, std::ios::binary);
  f << content;
  return p.string();
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Runs fn, which must throw techevo::Error, and returns the error code.
template <typename F>
techevo::errc code_of(F&& fn) {
  try {
    fn();
  } catch (const techevo::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a techevo::Error, but nothing was thrown");
}

/// Runs fn, which must throw techevo::Error, and returns its message.
template <typename F>
std::string message_of(F&& fn) {
  try {
    fn();
  } catch (const techevo::Error& e) {
    return e.what();
  }
  throw std::runtime_error("expected a techevo::Error, but nothing was thrown");
}

}  // namespace testutil
