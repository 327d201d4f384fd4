#pragma once

#include <stdexcept>
#include <string>

namespace sll {

// Operands live in different rings, or a value is outside the domain of an
// operation (e.g. inverting a non-unit).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An operation was called with arguments violating its stated precondition.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested computation is not supported in this residue characteristic.
class unsupported_characteristic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An algebraic invariant that the library guarantees was found broken.
class invariant_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sll
