#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evoform {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the 0-based character position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownSymbolError : public Error {
 public:
  UnknownSymbolError(const std::string& name, std::size_t offset)
      : Error("unknown symbol '" + name + "' at offset " + std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

/// Evaluation outside a function's domain (ln of nonpositive, sqrt of negative,
/// division by zero).
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnboundSymbolError : public Error {
 public:
  using Error::Error;
};

/// Arguments of incompatible dimension or degree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A chart lacks the metric or connection an operation needs, or the metric
/// is unusable.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// An analysis could not reach its conclusion: a form that should be closed
/// is not, or a reconstruction residual is over tolerance.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

}  // namespace evoform
