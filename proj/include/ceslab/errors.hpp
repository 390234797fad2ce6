#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ceslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
  using Error::Error;
};

class UnsupportedExponent : public Error {
public:
  using Error::Error;
};

class UnsupportedParameter : public Error {
public:
  using Error::Error;
};

class NonFiniteValue : public Error {
public:
  using Error::Error;
};

/// lambda is too close to {0} u {1/n} for the closed-form resolvent.
class LambdaInSigmaZero : public Error {
public:
  LambdaInSigmaZero(const std::string& what, std::size_t nearest_index, double distance)
      : Error(what), nearest_index_(nearest_index), distance_(distance) {}

  /// 0 denotes the limit point 0, otherwise the point is 1/nearest_index().
  std::size_t nearest_index() const noexcept { return nearest_index_; }
  double distance() const noexcept { return distance_; }

private:
  std::size_t nearest_index_;
  double distance_;
};

/// A bound was requested outside the region of the complex plane where it applies.
class WrongRegime : public Error {
public:
  using Error::Error;
};

/// Product accumulation left the representable range; row/col are 1-based.
class ProductOverflow : public Error {
public:
  ProductOverflow(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

private:
  std::size_t row_;
  std::size_t col_;
};

class InvalidConfig : public Error {
public:
  using Error::Error;
};

}  // namespace ceslab
