#include "nlqc/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlqc {

namespace {

Eigen::Matrix3d frame(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d e1 = a.normalized();
  Eigen::Vector3d e2 = b - b.dot(e1) * e1;
  const double n = e2.norm();
  if (n < 1e-15 * b.norm()) throw std::invalid_argument("placement: reference vectors are collinear");
  e2 /= n;
  // second Gram-Schmidt sweep: the first leaves O(1e-16 / n) overlap with e1
  e2 -= e2.dot(e1) * e1;
  e2.normalize();
  Eigen::Matrix3d f;
  f.col(0) = e1;
  f.col(1) = e2;
  f.col(2) = e1.cross(e2);
  return f;
}

}  // namespace

Eigen::Vector3d bloch_vector(const QubitAmplitudePair& q) {
  const double n = q.norm();
  if (!(n > 0.0)) throw std::invalid_argument("bloch_vector: zero-norm state");
  const Amplitude x = std::conj(q.c1) * q.c2;
  return Eigen::Vector3d(2 * x.real(), 2 * x.imag(), std::norm(q.c1) - std::norm(q.c2)) / n;
}

Eigen::Vector3d bloch_vector(const BlochAngle& b) {
  return {std::sin(b.theta) * std::cos(b.phi_az), std::sin(b.theta) * std::sin(b.phi_az), std::cos(b.theta)};
}

BlochAngle to_bloch(const Eigen::Vector3d& v) {
  const double r = v.norm();
  BlochAngle b;
  b.theta = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
  double az = std::atan2(v.y(), v.x());
  if (az < 0) az += 2 * kPi;
  if (az >= 2 * kPi) az = 0.0;
  b.phi_az = az;
  return b;
}

BlochAngle to_bloch(const QubitAmplitudePair& q) {
  const double n = q.norm();
  if (!(n > 0.0)) throw std::invalid_argument("to_bloch: zero-norm state");
  BlochAngle b;
  // Polar angle from magnitudes keeps full precision near the poles.
  b.theta = 2 * std::atan2(std::abs(q.c2), std::abs(q.c1));
  if (std::abs(q.c1) > 0 && std::abs(q.c2) > 0) {
    double az = std::arg(q.c2) - std::arg(q.c1);
    az = std::fmod(az, 2 * kPi);
    if (az < 0) az += 2 * kPi;
    if (az >= 2 * kPi) az = 0.0;
    b.phi_az = az;
  }
  return b;
}

QubitAmplitudePair from_bloch(const BlochAngle& b) {
  return {Amplitude(std::cos(b.theta / 2), 0.0), std::polar(std::sin(b.theta / 2), b.phi_az)};
}

double bloch_distance(const BlochAngle& p, const BlochAngle& q) {
  // Haversine form: accurate for tiny separations.
  const double dth = std::sin((p.theta - q.theta) / 2);
  const double dph = std::sin((p.phi_az - q.phi_az) / 2);
  const double h = dth * dth + std::sin(p.theta) * std::sin(q.theta) * dph * dph;
  return 2 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

double bloch_distance(const QubitAmplitudePair& p, const QubitAmplitudePair& q) {
  return 2 * hilbert_angle(p, q);
}

double hilbert_angle(const QubitAmplitudePair& p, const QubitAmplitudePair& q) {
  const double np = std::sqrt(p.norm());
  const double nq = std::sqrt(q.norm());
  const Amplitude ip = std::conj(p.c1) * q.c1 + std::conj(p.c2) * q.c2;
  const double overlap = std::clamp(std::abs(ip) / (np * nq), 0.0, 1.0);
  // |<p|q_perp>| is the sine; atan2 stays accurate at both ends.
  const Amplitude cross = p.c1 * q.c2 - p.c2 * q.c1;
  const double sine = std::abs(cross) / (np * nq);
  return std::atan2(sine, overlap);
}

Mat2 su2_from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  const Eigen::Vector3d n = axis.normalized();
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const Amplitude i{0.0, 1.0};
  Mat2 u;
  u << c - i * s * n.z(), -i * s * n.x() - s * n.y(),
       -i * s * n.x() + s * n.y(), c + i * s * n.z();
  return u;
}

Mat2 su2_from_rotation(const Eigen::Matrix3d& r) {
  const Eigen::AngleAxisd aa(r);
  if (std::abs(aa.angle()) < 1e-15) return Mat2::Identity();
  return su2_from_axis_angle(aa.axis(), aa.angle());
}

Mat2 placement_unitary(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& ta,
                       const Eigen::Vector3d& tb) {
  const Eigen::Matrix3d r = frame(ta, tb) * frame(a, b).transpose();
  return su2_from_rotation(r);
}

Mat2 rotate_to_north(const Eigen::Vector3d& v) {
  const Eigen::Vector3d z(0, 0, 1);
  const Eigen::Vector3d u = v.normalized();
  Eigen::Vector3d axis = u.cross(z);
  const double s = axis.norm();
  const double angle = std::atan2(s, u.dot(z));
  if (s < 1e-15) {
    if (u.z() > 0) return Mat2::Identity();
    axis = Eigen::Vector3d(1, 0, 0);
  }
  return su2_from_axis_angle(axis, angle);
}

QubitAmplitudePair apply_unitary(const Mat2& u, const QubitAmplitudePair& q) {
  return {u(0, 0) * q.c1 + u(0, 1) * q.c2, u(1, 0) * q.c1 + u(1, 1) * q.c2};
}

}  // namespace nlqc
