#pragma once

#include <stdexcept>
#include <string>

namespace qhmp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes, lengths or indices that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A model object violates one of its numerical invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A dense object would exceed the configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace qhmp
