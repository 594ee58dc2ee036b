#pragma once

#include <stdexcept>
#include <string>

namespace mmlab {

enum class ErrorCode {
  InvalidArgument,
  Unclassifiable,
  NotApplicable,
  Io,
};

/// Single exception type for the library; the code lets callers (the CLI in
/// particular) map failures onto exit statuses without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(what);
}

}  // namespace mmlab
