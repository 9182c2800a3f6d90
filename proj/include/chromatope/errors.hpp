#pragma once

#include <stdexcept>
#include <string>

namespace chromatope {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed input: bad incidence data, wrong matrix shape, unknown builder, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_input"; }
};

/// A theorem hypothesis does not hold for the supplied instance.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "hypothesis_violation"; }
};

/// Ring reduction requested for a characteristic matrix outside the
/// unit-pivot fragment.
class UnsupportedMatrix : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported_matrix"; }
};

class RewriteDepthExceeded : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "rewrite_depth_exceeded"; }
};

/// Truncation depth too large: cutting hyperplanes collide.
class InfeasibleTruncation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "infeasible_truncation"; }
};

class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "arithmetic_overflow"; }
};

/// Rejected game operation. `reason()` is a stable machine-readable code.
class GameError : public Error {
 public:
  GameError(std::string reason, const std::string& what)
      : Error(what), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }
  const char* kind() const noexcept override { return "game_error"; }

 private:
  std::string reason_;
};

}  // namespace chromatope
