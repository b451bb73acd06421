#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conic {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; carries the offending character position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnsupportedFunction : public Error {
 public:
  using Error::Error;
};

class NonIntegerFrequency : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A substitution would leave the representable expression class
/// (e.g. trig of a non-integer frequency or trig in x, y).
class UnsupportedSubstitution : public Error {
 public:
  using Error::Error;
};

class DegenerateG : public Error {
 public:
  using Error::Error;
};

class NonInvertiblePhi : public Error {
 public:
  using Error::Error;
};

class BetaVanishesAtBase : public Error {
 public:
  using Error::Error;
};

class AnsatzTooLarge : public Error {
 public:
  using Error::Error;
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

class BlowUp : public Error {
 public:
  using Error::Error;
};

class TooShort : public Error {
 public:
  using Error::Error;
};

class NotCommuting : public Error {
 public:
  using Error::Error;
};

class NotIndependent : public Error {
 public:
  using Error::Error;
};

class ChartSingular : public Error {
 public:
  using Error::Error;
};

class DivisionNearZero : public Error {
 public:
  using Error::Error;
};

}  // namespace conic
