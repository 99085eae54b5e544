#pragma once

#include <stdexcept>
#include <string>

namespace ekr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct EmptyFamilyError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct CapExceededError : Error {
  using Error::Error;
};

struct ResourceGuardError : Error {
  using Error::Error;
};

struct GroundSetTooLargeError : Error {
  using Error::Error;
};

struct OverflowError : Error {
  using Error::Error;
};

struct SideConditionError : Error {
  using Error::Error;
};

struct NotADownsetError : Error {
  using Error::Error;
};

// A violated proof step on a concrete input. This is never swallowed: it
// would be a genuine counterexample and must surface to the caller.
struct ContradictionError : Error {
  using Error::Error;
};

}  // namespace ekr
