#pragma once

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace duet {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using Transform = Eigen::Isometry3d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  // clang-format off
  m <<     0.0, -v.z(),  v.y(),
         v.z(),    0.0, -v.x(),
        -v.y(),  v.x(),    0.0;
  // clang-format on
  return m;
}

inline Mat3 so3_exp(const Vec3& w) {
  const double th = w.norm();
  if (th < 1e-12) return Mat3::Identity() + skew(w);
  return Eigen::AngleAxisd(th, w / th).toRotationMatrix();
}

inline Vec3 so3_log(const Mat3& r) {
  Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

/// Inverse of the left Jacobian of SO(3). Used when linearizing
/// rotation-log residuals: d/dt Log(Exp(t*b) X) = Jl_inv(Log X) * b.
inline Mat3 so3_left_jacobian_inverse(const Vec3& w) {
  const Mat3 wx = skew(w);
  const double th = w.norm();
  if (th < 1e-5) {
    return Mat3::Identity() - 0.5 * wx + (1.0 / 12.0) * wx * wx;
  }
  const double c = 1.0 / (th * th) - (1.0 + std::cos(th)) / (2.0 * th * std::sin(th));
  return Mat3::Identity() - 0.5 * wx + c * wx * wx;
}

/// Fixed-axis roll/pitch/yaw to rotation matrix, R = Rz(y) * Ry(p) * Rx(r).
inline Mat3 rpy_to_matrix(const Vec3& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

inline Transform make_transform(const Mat3& r, const Vec3& p) {
  Transform t = Transform::Identity();
  t.linear() = r;
  t.translation() = p;
  return t;
}

inline double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace duet
