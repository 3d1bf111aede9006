#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace nlqc {

using Amplitude = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr double kPi = 3.14159265358979323846;

// Index of a qubit inside a register. Qubit 0 is the most significant bit
// of the basis index.
struct QubitIndex {
  std::size_t value = 0;

  constexpr QubitIndex() = default;
  constexpr explicit QubitIndex(std::size_t v) : value(v) {}

  friend constexpr bool operator==(QubitIndex, QubitIndex) = default;
  friend constexpr auto operator<=>(QubitIndex, QubitIndex) = default;
};

// Checks U U^dagger = I element-wise.
bool is_unitary(const Mat2& u, double tol = 1e-10);
bool is_unitary(const Mat4& u, double tol = 1e-10);

}  // namespace nlqc
