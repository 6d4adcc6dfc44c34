#pragma once

#include <stdexcept>
#include <string>

namespace mosgnn {

/// Broad failure class; the CLI maps it onto a process exit code.
enum class ErrorKind {
  Usage,     // bad flags, bad parameters, contract violations by the caller
  Data,      // malformed or inconsistent input data / files
  Numeric,   // non-finite values produced during computation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define MOSGNN_DEFINE_ERROR(Name, Kind)                                      \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

MOSGNN_DEFINE_ERROR(DimensionError, Usage)
MOSGNN_DEFINE_ERROR(ParameterError, Usage)
MOSGNN_DEFINE_ERROR(IndexError, Usage)
MOSGNN_DEFINE_ERROR(StateError, Usage)
MOSGNN_DEFINE_ERROR(EvaluationError, Data)
MOSGNN_DEFINE_ERROR(DataError, Data)
MOSGNN_DEFINE_ERROR(FormatError, Data)
MOSGNN_DEFINE_ERROR(BatchError, Data)
MOSGNN_DEFINE_ERROR(ConstructionError, Data)
MOSGNN_DEFINE_ERROR(ValidationError, Data)
MOSGNN_DEFINE_ERROR(IncompatibleError, Data)
MOSGNN_DEFINE_ERROR(NumericError, Numeric)

#undef MOSGNN_DEFINE_ERROR

}  // namespace mosgnn
