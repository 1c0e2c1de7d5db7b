#pragma once

#include <stdexcept>
#include <string>

namespace seernf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input: unknown rating label, bad CSV row, bad config value.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument outside its admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A model formula evaluated outside its domain (division by zero, log of a
/// non-positive value, non-positive size).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A required parameter value is absent.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Normalization of an all-zero firing-strength vector.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Dataset columns that do not belong to any known source model.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Mapping rules that cannot be applied to a record.
class MappingError : public Error {
 public:
  using Error::Error;
};

/// A split protocol that cannot be applied to the given dataset.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A value table or project that fails its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file that could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace seernf
