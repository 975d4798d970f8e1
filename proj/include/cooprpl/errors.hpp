#pragma once

#include <stdexcept>
#include <string>

namespace cooprpl {

enum class ErrorKind {
  InvalidArgument,
  DegenerateLink,
  DisconnectedRoot,
  MalformedStats,
  NoParent,
  Config,
  Io,
  Codec,
};

// Errors carry a short machine-readable name ("degenerate-link", ...) as
// their what() prefix so diagnostics stay greppable across the C boundary.
class SimError : public std::runtime_error {
 public:
  SimError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cooprpl
