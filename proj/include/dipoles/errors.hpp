#ifndef DIPOLES_ERRORS_HPP
#define DIPOLES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dipoles {

// Numerical failures distinct from argument/contract violations
// (std::invalid_argument / std::domain_error are used for those).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mode whose bilinear norm v^T v vanishes; the matrix is (numerically)
// defective under the unconjugated inner product.
class DefectiveModeError : public NumericalError {
 public:
  DefectiveModeError(int mode_index, const std::string& what)
      : NumericalError(what), mode_index(mode_index) {}
  int mode_index;
};

// Drive tuned onto an exactly dark resonance: |G_alpha - i*delta| ~ 0.
class ResonanceSingularityError : public NumericalError {
 public:
  ResonanceSingularityError(int mode_index, const std::string& what)
      : NumericalError(what), mode_index(mode_index) {}
  int mode_index;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoEmissionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dipoles

#endif  // DIPOLES_ERRORS_HPP
