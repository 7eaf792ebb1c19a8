#pragma once

#include <stdexcept>
#include <string>

namespace rectcft {

// Raised when an exact identity that must hold structurally fails, e.g. a
// log-coefficient that should be divisible by c is not.
class StructuralError : public std::logic_error {
 public:
  explicit StructuralError(const std::string& what) : std::logic_error(what) {}
};

// Raised by floating-point code when a quantity leaves its admissible range
// by more than round-off (negative determinants, complex eigenvalues, ...).
class NumericalAlarm : public std::runtime_error {
 public:
  explicit NumericalAlarm(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rectcft
