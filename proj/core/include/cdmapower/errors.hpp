#pragma once

#include <stdexcept>
#include <string>

namespace cdmapower {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

// MS co-located with a base station other than the serving one.
class DegeneratePositionError : public Error {
 public:
  using Error::Error;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class NumericalDomainError : public Error {
 public:
  using Error::Error;
};

// The MS cannot camp on the serving cell under the given policy.
class NoCoverageError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdmapower
