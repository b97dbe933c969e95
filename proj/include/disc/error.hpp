#pragma once

#include <stdexcept>
#include <string>

namespace disc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct InvalidEmbedding : Error {
  using Error::Error;
};

struct ParameterError : Error {
  using Error::Error;
};

struct CapacityError : Error {
  using Error::Error;
};

struct InfeasibleDegree : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct CertificateError : Error {
  using Error::Error;
};

struct SearchFailure : Error {
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace disc
