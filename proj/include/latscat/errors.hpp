#pragma once

#include <stdexcept>
#include <string>

namespace latscat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problems with what the caller handed in. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class HermiticityError : public InputError {
 public:
  HermiticityError(int site, double defect)
      : InputError("potential is not Hermitian at site " + std::to_string(site) +
                   " (max |V - V*| = " + std::to_string(defect) + ")"),
        site_(site),
        defect_(defect) {}
  int site() const noexcept { return site_; }
  double defect() const noexcept { return defect_; }

 private:
  int site_;
  double defect_;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

// z = +-1 requested from an S^1 \ {-1, 1} routine.
class BandEdgeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class WindowError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical certificate failures. The CLI maps these to exit code 1.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(const std::string& what, double ratio)
      : NumericalError(what + " (sigma_min/sigma_max = " + std::to_string(ratio) + ")"),
        ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double tail)
      : NumericalError(what + " (tail sum = " + std::to_string(tail) + ")"), tail_(tail) {}
  double tail() const noexcept { return tail_; }

 private:
  double tail_;
};

class InconsistentSolutionsError : public NumericalError {
 public:
  InconsistentSolutionsError(const std::string& what, double deviation)
      : NumericalError(what + " (deviation = " + std::to_string(deviation) + ")"),
        deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

// u_+^1(1) singular and no nearby origin translation helps.
class AssumptionViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A quantity that is provably well-behaved came out degenerate.
class TheoryViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace latscat
