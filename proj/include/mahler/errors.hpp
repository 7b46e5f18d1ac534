#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

enum class ErrorKind {
  InvalidArgument,
  DegenerateBody,
  GenerationFailed,
  OutOfClass,
  DegenerateInterval,
  InvalidNeedle,
  SearchFailed,
  UnboundedBody,
  NormalizationFailed,
  PlaneSearchFailed,
  HalvingFailed,
  PancakeTooThick,
  NotUnconditional,
  UnknownReference,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can map it to
// an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace mahler
