#pragma once

#include <stdexcept>
#include <string>

namespace tfim {

/// Precondition on an argument was not met.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures that indicate broken numerical structure: non-unitary
/// propagators, Γ spectra outside [0, 1], gap-closing modes.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DegenerateMode : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class StructureViolation : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class SpectrumViolation : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// A fit window holds too few samples; what() names the window.
class InsufficientData : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NoInteriorPeak : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NoOverlap : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace tfim
