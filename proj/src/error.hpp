#pragma once

#include <stdexcept>
#include <string>

namespace hrom {

// Error categories; they map 1:1 onto C API status codes and CLI exit codes.
enum class ErrorCode {
  internal,
  config,
  numeric,
  missing_input,
  invalid_argument,
  io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace hrom
