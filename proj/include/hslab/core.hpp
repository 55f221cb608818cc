#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace hslab {

using Complex = std::complex<double>;

// Points of the closed disk may exceed |z| = 1 by this much before they are rejected.
inline constexpr double kBoundaryEps = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input on the diagonal or at coincident boundary points.
class SingularInput : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidWeight : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class ChartBuildError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A point of the closed unit disk.
struct DiskPoint {
  double re = 0.0;
  double im = 0.0;

  DiskPoint() = default;
  DiskPoint(double x, double y) : re(x), im(y) { validate(); }
  DiskPoint(Complex z) : DiskPoint(z.real(), z.imag()) {}  // NOLINT: implicit on purpose

  Complex c() const { return {re, im}; }
  double abs2() const { return re * re + im * im; }
  bool interior() const { return abs2() < 1.0 - kBoundaryEps; }

 private:
  void validate() const {
    if (!(std::isfinite(re) && std::isfinite(im)) || abs2() > 1.0 + kBoundaryEps)
      throw DomainError("point outside the closed unit disk");
  }
};

// 1 - |z|^2, snapped to exactly 0 within kBoundaryEps of the circle and never negative.
inline double one_minus_abs2(Complex z) {
  double v = 1.0 - std::norm(z);
  return v <= kBoundaryEps ? 0.0 : v;
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace hslab
