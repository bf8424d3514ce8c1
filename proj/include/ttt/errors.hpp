#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data. The CLI maps this family to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Solver failures. The CLI maps this family to exit code 3.
class SolverError : public Error {
 public:
  using Error::Error;
};

enum class ConstraintKind { Length, Slope, CyclicSlope, Antisymmetry, Range, Normalization, Symmetry, Coprime };

inline const char* to_string(ConstraintKind kind);

class ConstraintViolation : public ValidationError {
 public:
  ConstraintViolation(std::size_t index, ConstraintKind kind, const std::string& detail)
      : ValidationError(std::string("constraint violation (") + to_string(kind) + ") at index " +
                        std::to_string(index) + ": " + detail),
        index_(index),
        kind_(kind) {}

  std::size_t index() const { return index_; }
  ConstraintKind kind() const { return kind_; }

 private:
  std::size_t index_;
  ConstraintKind kind_;
};

class InconsistentClosure : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegeneratePlane : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SignalBelowNoise : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IdentityViolation : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public SolverError {
 public:
  NoConvergence(int iterations, double residual)
      : SolverError("Newton iteration did not converge after " + std::to_string(iterations) +
                    " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class GridTooCoarse : public SolverError {
 public:
  GridTooCoarse(double discrepancy, double limit)
      : SolverError("coarse/fine grid solutions differ by " + std::to_string(discrepancy) +
                    " (limit " + std::to_string(limit) + ")"),
        discrepancy_(discrepancy) {}

  double discrepancy() const { return discrepancy_; }

 private:
  double discrepancy_;
};

inline const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Length: return "length";
    case ConstraintKind::Slope: return "slope";
    case ConstraintKind::CyclicSlope: return "cyclic slope";
    case ConstraintKind::Antisymmetry: return "antisymmetry";
    case ConstraintKind::Range: return "range";
    case ConstraintKind::Normalization: return "normalization";
    case ConstraintKind::Symmetry: return "symmetry";
    case ConstraintKind::Coprime: return "coprime";
  }
  return "unknown";
}

}  // namespace ttt
