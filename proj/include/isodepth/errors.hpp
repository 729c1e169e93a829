#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isodepth {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public Error {
 public:
  EmptyInput() : Error("empty input") {}
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

class NonFiniteValue : public Error {
 public:
  NonFiniteValue() : Error("non-finite value in input") {}
};

class DuplicateValue : public Error {
 public:
  explicit DuplicateValue(double value)
      : Error("duplicate coordinate " + std::to_string(value)), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

class NotEnoughPoints : public Error {
 public:
  explicit NotEnoughPoints(const std::string& what = "not enough points") : Error(what) {}
};

class RangeOutOfBounds : public Error {
 public:
  explicit RangeOutOfBounds(const std::string& what = "gap range out of bounds") : Error(what) {}
};

class IndexOutOfBounds : public Error {
 public:
  explicit IndexOutOfBounds(const std::string& what = "index out of bounds") : Error(what) {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// Row is 1-based over data rows (the header is row 0).
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& column)
      : Error("cannot parse row " + std::to_string(row) + ", column " + column),
        row_(row),
        column_(column) {}
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

class NoNumericColumns : public Error {
 public:
  NoNumericColumns() : Error("no numeric columns in input") {}
};

class KTooLarge : public Error {
 public:
  KTooLarge(std::size_t k, std::size_t candidates)
      : Error("k = " + std::to_string(k) + " exceeds candidate count " +
              std::to_string(candidates)) {}
};

class InvalidParams : public Error {
 public:
  explicit InvalidParams(const std::string& what) : Error(what) {}
};

class OddN0 : public InvalidParams {
 public:
  explicit OddN0(std::size_t n0)
      : InvalidParams("n0 must be even, got " + std::to_string(n0)) {}
};

class EvenN1 : public InvalidParams {
 public:
  explicit EvenN1(std::size_t n1)
      : InvalidParams("n1 must be odd, got " + std::to_string(n1)) {}
};

}  // namespace isodepth
