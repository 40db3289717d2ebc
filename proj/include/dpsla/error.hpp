#pragma once

#include <stdexcept>
#include <string>

namespace dpsla {

// Error categories. The numeric values are mirrored by dpsla_status in the
// C API, so keep them in sync.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Config = 2,
  Dimension = 3,
  Numeric = 4,
  Solver = 5,
  Io = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace dpsla
