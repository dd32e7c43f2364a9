#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphaug {

// Error categories surfaced through the C API as status codes.
enum class ErrorKind : int {
  InvalidArgument = 1,
  Io = 2,
  Parse = 3,
  State = 4,       // missing prerequisite (e.g. stage checkpoint)
  Divergence = 5,  // non-finite loss/gradients during training
  Internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void check(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

inline void check_arg(bool cond, const std::string& msg) {
  check(cond, ErrorKind::InvalidArgument, msg);
}

// Floor applied inside every log/probability computation (shared across modules).
inline constexpr double kProbFloor = 1e-7;

}  // namespace graphaug
