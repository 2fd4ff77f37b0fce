#ifndef MAGNL_ERRORS_HPP
#define MAGNL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace magnl {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A domain/hole/field specification violates its invariants.
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// Configuration file is malformed or violates the schema.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Mesh too coarse to resolve the requested feature.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Element-level failure during matrix assembly.
class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// Linear or eigenvalue solver failure.
class SolveError : public Error {
 public:
  using Error::Error;
};

/// Geometric query failed (point outside mesh, circle leaving the domain, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A point has no obstacle-free axis half-line; raised where the geometric
/// star condition is a precondition.
class PropertyStarViolation : public Error {
 public:
  using Error::Error;
};

/// Invariant the implementation guarantees was broken; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace magnl

#endif  // MAGNL_ERRORS_HPP
