#pragma once

#include <stdexcept>
#include <string>

namespace fct {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// algebra
struct MissingAssignment : Error { using Error::Error; };
struct ZeroPolynomial : Error { using Error::Error; };
struct DiagonalVariable : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// graph
struct SchemaError : Error { using Error::Error; };
struct DuplicateLabel : Error { using Error::Error; };
struct DanglingEdge : Error { using Error::Error; };
struct UnknownNode : Error { using Error::Error; };
struct UnknownVertex : Error { using Error::Error; };

// dimension
struct InvalidLabeling : Error { using Error::Error; };
struct KeyMismatch : Error { using Error::Error; };

// invariants
struct NotTwoFactor : Error { using Error::Error; };
struct OverlapTooLarge : Error { using Error::Error; };
struct OverlapNotTwo : Error { using Error::Error; };
struct GraphMismatch : Error { using Error::Error; };
struct BadSize : Error { using Error::Error; };
struct NotChain : Error { using Error::Error; };

// oracle
struct CapExceeded : Error { using Error::Error; };
struct LiftFailed : Error { using Error::Error; };

}  // namespace fct
