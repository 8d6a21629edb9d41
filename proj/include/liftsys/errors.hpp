#ifndef LIFTSYS_ERRORS_HPP
#define LIFTSYS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liftsys {

// Process exit codes used by the command line front end.
enum class ExitCode : int {
  ok = 0,
  certificate_failure = 1,
  input_error = 2,
  cap_exceeded = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ExitCode::input_error, what) {}
};

class DimensionMismatch : public InputError {
 public:
  explicit DimensionMismatch(const std::string& what) : InputError("dimension mismatch: " + what) {}
};

class ArityMismatch : public InputError {
 public:
  explicit ArityMismatch(const std::string& what) : InputError("variable arity mismatch: " + what) {}
};

class TruncationOverflow : public InputError {
 public:
  explicit TruncationOverflow(const std::string& what) : InputError("truncation overflow: " + what) {}
};

class ExponentOverflow : public InputError {
 public:
  explicit ExponentOverflow(const std::string& what) : InputError("exponent overflow: " + what) {}
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError("parse error at position " + std::to_string(position) + ": " + what),
        position_(position),
        detail_(what) {}
  std::size_t position() const noexcept { return position_; }
  // The message without the position prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t position_;
  std::string detail_;
};

class HorizonExceeded : public InputError {
 public:
  explicit HorizonExceeded(const std::string& what) : InputError("horizon exceeded: " + what) {}
};

class TemplateMismatch : public InputError {
 public:
  explicit TemplateMismatch(const std::string& what) : InputError("template mismatch: " + what) {}
};

// A configured cap (truncation, minor count, horizon) was hit before the
// computation could certify its answer.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& cap_name, const std::string& what)
      : Error(ExitCode::cap_exceeded, "cap '" + cap_name + "' exceeded: " + what), cap_(cap_name) {}
  const std::string& cap_name() const noexcept { return cap_; }

 private:
  std::string cap_;
};

class NotArtinianWithinCap : public CapExceeded {
 public:
  NotArtinianWithinCap(const std::string& what, int cap)
      : CapExceeded("colength_witness", what + " (no witness degree <= " + std::to_string(cap) + ")") {}
};

class NotFiniteLength : public CapExceeded {
 public:
  explicit NotFiniteLength(const std::string& what) : CapExceeded("module_witness", what) {}
};

// A theorem-backed assertion failed. This would contradict a proven statement,
// so it is always treated as a hard failure.
class AssertionFailure : public Error {
 public:
  explicit AssertionFailure(const std::string& what) : Error(ExitCode::certificate_failure, what) {}
};

}  // namespace liftsys

#endif  // LIFTSYS_ERRORS_HPP
