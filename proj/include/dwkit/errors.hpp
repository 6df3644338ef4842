#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace dwkit {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by group validation; `triple` holds the first offending elements
// (unused slots are -1).
class NotAGroup : public Error {
 public:
  NotAGroup(const std::string& what, std::array<int, 3> triple)
      : Error("not a group: " + what), triple(triple) {}
  std::array<int, 3> triple;
};

class UnknownBuiltin : public Error {
 public:
  explicit UnknownBuiltin(const std::string& name) : Error("unknown builtin group: " + name) {}
};

class UnknownFamily : public Error {
 public:
  explicit UnknownFamily(const std::string& name) : Error("unknown cocycle family: " + name) {}
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, long long rows, long long cols)
      : Error("budget exceeded: " + what), rows(rows), cols(cols) {}
  long long rows, cols;
};

class NotACocycle : public Error {
 public:
  explicit NotACocycle(const std::string& what) : Error("not a cocycle: " + what) {}
};

class NonCommuting : public Error {
 public:
  NonCommuting(int a, int b)
      : Error("elements " + std::to_string(a) + " and " + std::to_string(b) + " do not commute"),
        a(a), b(b) {}
  int a, b;
};

class DegreeMismatch : public Error {
 public:
  DegreeMismatch(int expected, int got)
      : Error("degree mismatch: expected " + std::to_string(expected) + ", got " + std::to_string(got)) {}
};

class NotGaugeInvariant : public Error {
 public:
  explicit NotGaugeInvariant(int morphism)
      : Error("integrand not gauge invariant along morphism " + std::to_string(morphism)),
        morphism(morphism) {}
  int morphism;
};

class IncompatiblePhases : public Error {
 public:
  explicit IncompatiblePhases(const std::string& what) : Error("incompatible phases: " + what) {}
};

class InvalidCocycle : public Error {
 public:
  explicit InvalidCocycle(const std::string& what) : Error("invalid non-abelian cocycle: " + what) {}
};

class SectionNotValid : public Error {
 public:
  explicit SectionNotValid(const std::string& what) : Error("invalid section: " + what) {}
};

class InvalidExtension : public Error {
 public:
  explicit InvalidExtension(const std::string& what) : Error("invalid extension: " + what) {}
};

class NotABoundaryPair : public Error {
 public:
  explicit NotABoundaryPair(const std::string& what) : Error("not a boundary pair: " + what) {}
};

class ArithmeticOverflow : public Error {
 public:
  ArithmeticOverflow() : Error("integer overflow in exact arithmetic") {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

}  // namespace dwkit
