#pragma once

#include <stdexcept>
#include <string>

namespace pfaff {

/// Malformed or inconsistent input (degree mismatch, bad index, parse error).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition of an operation does not hold
/// (non-integrable generators, dependent generators, ...).
class precondition_violated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An internal cross-check between two independent routes disagreed.
class oracle_mismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfaff
