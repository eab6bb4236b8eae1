#pragma once

#include <stdexcept>
#include <string>

namespace magpress {

// Root of every error the library throws. Callers that only care about
// "something physical went wrong" catch this one.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Evaluation exactly at an undamped resonance pole of eps or mu.
class PoleError : public Error {
public:
  using Error::Error;
};

// Frequency lies in a stop band (eps*mu < 0) where no transverse mode exists.
class BandError : public Error {
public:
  using Error::Error;
};

// The response denominator c^2 k^2 - eps mu omega^2 vanishes.
class SingularResponseError : public Error {
public:
  using Error::Error;
};

// Repeated root inside the search window.
class DegenerateRootError : public Error {
public:
  using Error::Error;
};

// Adaptive quadrature ran out of subdivisions before meeting tolerance.
class QuadratureError : public Error {
public:
  QuadratureError(const std::string &what, double worst_lo, double worst_hi,
                  double worst_error)
      : Error(what), worst_lo(worst_lo), worst_hi(worst_hi),
        worst_error(worst_error) {}

  double worst_lo;
  double worst_hi;
  double worst_error;
};

// Argument outside the domain of an operation (negative z, bad grid, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Invalid model parameters rejected at construction.
class ModelError : public Error {
public:
  using Error::Error;
};

// Internal consistency check failed (e.g. wrong branch count).
class ConsistencyError : public Error {
public:
  using Error::Error;
};

} // namespace magpress
