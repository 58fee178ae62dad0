#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpspline {

enum class ErrorKind {
  Domain,             // evaluation point outside [a, b]
  DegenerateDesign,   // too few unique design points, bad ordering
  Order,              // invalid spline / penalty / derivative order
  Dimension,          // conforming-size mismatch
  InsufficientData,   // too few observations for the requested estimate
  Factorization,      // non-positive pivot in a Cholesky factorization
  SingularFit,        // IRWLS system could not be solved
  DegenerateGcv,      // Tr H >= n
  Selection,          // every lambda candidate was degenerate
  Config,             // invalid configuration
  Io,                 // file / parse problems
};

const char* to_string(ErrorKind kind);

/// Base error for the library. `kind()` classifies the failure for callers
/// such as the CLI that map errors onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the numerical machinery rather than of the input.
  bool numerical() const noexcept {
    return kind_ == ErrorKind::Factorization || kind_ == ErrorKind::SingularFit ||
           kind_ == ErrorKind::DegenerateGcv || kind_ == ErrorKind::Selection;
  }

 private:
  ErrorKind kind_;
};

class FactorizationError : public Error {
 public:
  FactorizationError(std::size_t pivot, double value)
      : Error(ErrorKind::Factorization,
              "band_cholesky: non-positive pivot " + std::to_string(value) +
                  " at index " + std::to_string(pivot)),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace rpspline
