#pragma once

#include <stdexcept>
#include <string>

namespace mcvqe {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  DegenerateGeometry,
  CapExceeded,
  Schema,
  Io,
  NotConverged,
};

/// Library-wide exception. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace mcvqe
