#pragma once

#include <stdexcept>
#include <string>

namespace rog {

enum class ErrorKind {
  kInvalidInput,
  kNumericalFailure,
  kMissingCertificate,
  kOracleUnavailable,
  kNoRay,
  kNonChordal,
  kInvalidGlue,
  kOutOfCatalog,
  kNotStructured,
};

const char* to_string(ErrorKind kind);

/// Domain error raised by every module. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rog
