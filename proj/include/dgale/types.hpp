#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dgale {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using State4 = Eigen::Matrix<double, 4, 1>;

// Column layout of the per-element coefficient blocks.
enum Component : int { kRho = 0, kMomX = 1, kMomY = 2, kEnergy = 3, kSpecies = 4 };
inline constexpr int kNumComponents = 5;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Anything that invalidates a time step: positivity loss, inverted elements.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public NumericalError {
 public:
  PositivityError(const std::string& what, int element = -1)
      : NumericalError(what + (element >= 0 ? " (element " + std::to_string(element) + ")" : "")),
        element_(element) {}
  int element() const { return element_; }

 private:
  int element_;
};

class MeshError : public NumericalError {
 public:
  MeshError(const std::string& what, int element = -1)
      : NumericalError(what + (element >= 0 ? " (element " + std::to_string(element) + ")" : "")),
        element_(element) {}
  int element() const { return element_; }

 private:
  int element_;
};

}  // namespace dgale
