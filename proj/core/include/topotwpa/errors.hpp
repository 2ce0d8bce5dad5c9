#pragma once

#include <stdexcept>
#include <string>

namespace topotwpa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TOPOTWPA_DEFINE_ERROR(Name)      \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

// circuit
TOPOTWPA_DEFINE_ERROR(NonPositiveParameter)
// meanfield
TOPOTWPA_DEFINE_ERROR(NegativeDrive)
TOPOTWPA_DEFINE_ERROR(SolverTolerance)
// lattice
TOPOTWPA_DEFINE_ERROR(DimensionMismatch)
TOPOTWPA_DEFINE_ERROR(EigenSolverFailure)
// topology
TOPOTWPA_DEFINE_ERROR(SvdFailure)
TOPOTWPA_DEFINE_ERROR(DegenerateFit)
TOPOTWPA_DEFINE_ERROR(NotTopological)
// response
TOPOTWPA_DEFINE_ERROR(SingularMatrix)
TOPOTWPA_DEFINE_ERROR(IntegrationNotConverged)
// sweep
TOPOTWPA_DEFINE_ERROR(AllUnstable)
TOPOTWPA_DEFINE_ERROR(NoOnset)
// configuration and output
TOPOTWPA_DEFINE_ERROR(ValidationError)
TOPOTWPA_DEFINE_ERROR(IoError)
TOPOTWPA_DEFINE_ERROR(SchemaMismatch)
TOPOTWPA_DEFINE_ERROR(UnsupportedSchema)

#undef TOPOTWPA_DEFINE_ERROR

/// Configuration text could not be parsed. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace topotwpa
