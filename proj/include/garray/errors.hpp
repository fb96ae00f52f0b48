#pragma once

#include <stdexcept>
#include <string>

namespace garray {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Series lengths disagree with the grid they are attached to.
class InputShapeError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

/// Invalid or non-finite scenario / run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Object coincides with the point of observation.
class DegenerateGeometryError : public Error {
public:
  using Error::Error;
};

/// Two streams that must share a time grid do not.
class AlignmentError : public Error {
public:
  using Error::Error;
};

/// Estimator used outside the motion regime it is defined for.
class RegimeError : public Error {
public:
  using Error::Error;
};

}  // namespace garray
