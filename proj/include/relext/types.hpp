#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace relext {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Rank/equality tolerance used when an instance does not override it.
inline constexpr double kDefaultTol = 1e-9;

// Malformed input: non-finite entries, shape mismatches, parameters that
// fail validation.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// (T - lambda)^{-1} is not an everywhere defined single-valued operator.
class SpectrumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A construction that must succeed by theory did not. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace relext
