#pragma once

#include <stdexcept>
#include <string>

namespace amap {

enum class ErrorCode {
  invalid_argument,
  parse,
  empty_mapping_set,
  window_empty,
  sampler_exhausted,
  cap_exceeded,
  fit_failed,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::empty_mapping_set: return "empty_mapping_set";
    case ErrorCode::window_empty: return "window_empty";
    case ErrorCode::sampler_exhausted: return "sampler_exhausted";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::fit_failed: return "fit_failed";
  }
  return "unknown";
}

/// Every failure raised by the library carries a code so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace detail

}  // namespace amap
