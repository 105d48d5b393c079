#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wsym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree (matrix shapes, tower levels, lists).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A form that must be invertible is not.
class DegenerateFormError : public Error {
 public:
  DegenerateFormError() : Error("degenerate") {}
  explicit DegenerateFormError(const std::string& what) : Error("degenerate: " + what) {}
};

/// An operation was called on inputs that fail its documented precondition.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error("precondition: " + what) {}
};

class NotSubmersionError : public Error {
 public:
  explicit NotSubmersionError(const std::string& what) : Error("not a submersion: " + what) {}
};

/// The segment from the region center to a point leaves the region.
class RegionError : public Error {
 public:
  explicit RegionError(const std::string& what) : Error("not star-shaped reachable: " + what) {}
};

/// The flat of the interpolating family became (numerically) singular.
class ValidityError : public Error {
 public:
  ValidityError(double t, Eigen::VectorXd x, double sigma_min)
      : Error("left validity region at t=" + std::to_string(t) +
              " (sigma_min=" + std::to_string(sigma_min) + ")"),
        t_(t),
        x_(std::move(x)),
        sigma_min_(sigma_min) {}

  double t() const { return t_; }
  const Eigen::VectorXd& x() const { return x_; }
  double sigma_min() const { return sigma_min_; }

 private:
  double t_;
  Eigen::VectorXd x_;
  double sigma_min_;
};

/// The base point's own trajectory failed, or the flow failed its stability guard.
class NoChartError : public Error {
 public:
  explicit NoChartError(const std::string& what) : Error("no chart: " + what) {}
};

}  // namespace wsym
