#pragma once

#include <Eigen/Dense>

#include "nlqc/types.hpp"
#include "nlqc/weinberg.hpp"

namespace nlqc {

// theta in [0, pi] from +z (|0>), phi_az in [0, 2pi).
struct BlochAngle {
  double theta = 0.0;
  double phi_az = 0.0;
};

Eigen::Vector3d bloch_vector(const QubitAmplitudePair& q);
Eigen::Vector3d bloch_vector(const BlochAngle& b);
BlochAngle to_bloch(const QubitAmplitudePair& q);
BlochAngle to_bloch(const Eigen::Vector3d& v);
QubitAmplitudePair from_bloch(const BlochAngle& b);

double bloch_distance(const BlochAngle& p, const BlochAngle& q);
double bloch_distance(const QubitAmplitudePair& p, const QubitAmplitudePair& q);
// arccos |<p|q>| for normalized inputs; half the Bloch distance.
double hilbert_angle(const QubitAmplitudePair& p, const QubitAmplitudePair& q);

// exp(-i angle/2 n.sigma); rotates Bloch vectors by `angle` about `axis`.
Mat2 su2_from_axis_angle(const Eigen::Vector3d& axis, double angle);
Mat2 su2_from_rotation(const Eigen::Matrix3d& r);

// SU(2) element whose Bloch action takes a -> ta and b -> tb. Requires
// angle(a, b) == angle(ta, tb) and a, b not collinear.
Mat2 placement_unitary(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& ta,
                       const Eigen::Vector3d& tb);

// Shortest rotation taking v onto +z.
Mat2 rotate_to_north(const Eigen::Vector3d& v);

QubitAmplitudePair apply_unitary(const Mat2& u, const QubitAmplitudePair& q);

}  // namespace nlqc
