#pragma once

#include <stdexcept>
#include <string>

namespace rbl {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Coincident nodes, collinear shapes, rank-deficient kernels.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iterations that blow up or fail to produce finite output.
class NumericalFailureError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbl
