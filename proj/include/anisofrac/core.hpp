#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace anisofrac {

/// A point or vector in one or two space dimensions.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;

/// A symmetric n-by-n tensor value, n <= 2.
using Tensor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Point point1(double x) {
  Point p(1);
  p << x;
  return p;
}

inline Point point2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CoincidentPointsError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, long pivot) : Error(what), pivot_(pivot) {}
  long pivot() const { return pivot_; }

 private:
  long pivot_;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class OrderOutOfRangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Serial runs are the bit-exact reference; Parallel splits row work across threads.
enum class Execution { Serial, Parallel };

}  // namespace anisofrac
