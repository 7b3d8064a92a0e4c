#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace facegraph {

// Base class for all library errors. Subclasses map onto the CLI exit
// codes: input-format problems -> 2, missing/inconsistent data -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroVectorError : public Error {
 public:
  ZeroVectorError() : Error("embedding is the zero vector") {}
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateRecordError : public Error {
 public:
  using Error::Error;
};

class UnsortedInputError : public Error {
 public:
  using Error::Error;
};

class MissingEmbeddingError : public Error {
 public:
  using Error::Error;
};

class MissingScoreError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  EmptyInputError() : Error("empty input") {}
};

class InfeasibleMarginError : public Error {
 public:
  using Error::Error;
};

class JoinError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace facegraph
