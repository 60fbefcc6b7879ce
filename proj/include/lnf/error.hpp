#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lnf {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside its documented domain (non-finite impedance, g <= 0, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Two operands do not share a frequency grid.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A conversion is singular at a specific frequency.
class SingularPointError : public Error {
 public:
  SingularPointError(const std::string& what, double frequency_hz)
      : Error(what), frequency_hz_(frequency_hz) {}
  double frequency_hz() const { return frequency_hz_; }

 private:
  double frequency_hz_;
};

// Physical model is undefined for the requested parameters.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Resonance features could not be located in a swept response.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

// Filter metrics cannot be computed from the given sweep.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

// Malformed text input; line is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lnf
