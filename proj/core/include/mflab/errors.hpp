#pragma once
#include <stdexcept>
#include <string>

namespace mflab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed object: shape mismatch, non-hermitian kernel, bad weights, ...
struct StructuralError : Error { using Error::Error; };
// scale not resolved by the grid (epsilon < spacing, kernel too narrow, ...)
struct ResolutionError : Error { using Error::Error; };
// rank/slot count out of range for an operation
struct ArityError : Error { using Error::Error; };
// occupation above 1/N where fermionic statistics require it
struct PauliBoundError : Error { using Error::Error; };
// array would exceed the in-core budget
struct CapacityError : Error { using Error::Error; };
// time step above the stability rule, or observed norm drift
struct StepSizeError : Error { using Error::Error; };
// requested estimate outside its certified parameter range
struct BoundInapplicableError : Error { using Error::Error; };
// unmet operation precondition (decay, normalization, ...)
struct PreconditionError : Error { using Error::Error; };
// quadrature/integration window too small for the requested accuracy
struct WindowError : Error { using Error::Error; };
// file/serialization failure
struct IoError : Error { using Error::Error; };

}  // namespace mflab
