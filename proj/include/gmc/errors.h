#pragma once

#include <stdexcept>
#include <string>

namespace gmc {

/// Base class for every error raised by the library.
class GmcError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gamma-type function evaluated at (or within tolerance of) a pole.
class PoleError : public GmcError {
 public:
  using GmcError::GmcError;
};

/// Argument outside the domain where the quantity is defined.
class DomainError : public GmcError {
 public:
  using GmcError::GmcError;
};

/// Moment parameters violate the existence bounds.
class BoundsError : public GmcError {
 public:
  using GmcError::GmcError;
};

/// A series or quadrature failed to reach its tolerance.
class ConvergenceError : public GmcError {
 public:
  using GmcError::GmcError;
};

/// Hypergeometric lower parameter C is a nonpositive integer.
class DegenerateCError : public GmcError {
 public:
  using GmcError::GmcError;
};

/// Quadrature grid too coarse for the number of field modes.
class GridError : public GmcError {
 public:
  using GmcError::GmcError;
};

/// Not enough Monte Carlo events to resolve a probability.
class ResolutionError : public GmcError {
 public:
  using GmcError::GmcError;
};

}  // namespace gmc
