#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace hilbert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

// Tolerance conventions used across the library.  Geometric point equality is
// tested on canonical representatives; spectral gaps decide isometry type.
inline constexpr double kPointTol = 1e-12;
inline constexpr double kSpectralGapTol = 1e-9;
inline constexpr double kDedupQuantum = 1e-9;

// Invalid argument values: wrong dimensions, points outside domains, bad
// parameter ranges.
struct ArgumentError : std::runtime_error {
  explicit ArgumentError(const std::string& what) : std::runtime_error(what) {}
};

// Geometric preconditions violated at runtime: point not interior, chord
// degenerate, boundary point where an interior one is required.
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// A chart cannot represent the requested point (hyperplane at infinity).
struct ChartError : std::runtime_error {
  explicit ChartError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative kernel failed to reach its tolerance; message carries the
// last iterates so the caller can judge how bad the failure is.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or reduction hit its configured cap.  Message names the cap.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hilbert
