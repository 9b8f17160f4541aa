#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace teletwin {

template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Vector6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar> using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar> using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;

/// 6-vector pose or pose difference: translation in [0,3), rotation vector in [3,6).
template <typename Scalar> using PoseVector = Vector6<Scalar>;

/// Rigid transform in SE(3), stored as rotation matrix + translation.
template <typename Scalar> struct Pose {
  Matrix3<Scalar> rotation = Matrix3<Scalar>::Identity();
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();

  Pose() = default;
  Pose(const Matrix3<Scalar> &r, const Vector3<Scalar> &t) : rotation(r), translation(t) {}

  static Pose Identity() { return {}; }
  static Pose Translation(const Vector3<Scalar> &t) { return {Matrix3<Scalar>::Identity(), t}; }
  static Pose Rotation(const Matrix3<Scalar> &r) { return {r, Vector3<Scalar>::Zero()}; }

  Pose operator*(const Pose &rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
  Vector3<Scalar> operator*(const Vector3<Scalar> &point) const { return rotation * point + translation; }

  Pose inverse() const {
    const Matrix3<Scalar> rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  /// 4x4 homogeneous matrix [R p; 0 1].
  Matrix4<Scalar> matrix() const {
    Matrix4<Scalar> m = Matrix4<Scalar>::Identity();
    m.template topLeftCorner<3, 3>() = rotation;
    m.template topRightCorner<3, 1>() = translation;
    return m;
  }

  static Pose FromMatrix(const Matrix4<Scalar> &m) {
    return {m.template topLeftCorner<3, 3>(), m.template topRightCorner<3, 1>()};
  }

  template <typename Other> Pose<Other> cast() const {
    return {rotation.template cast<Other>(), translation.template cast<Other>()};
  }
};

using Posed = Pose<double>;

template <typename Scalar> Matrix3<Scalar> skew(const Vector3<Scalar> &v) {
  Matrix3<Scalar> s;
  s << Scalar(0), -v.z(), v.y(), v.z(), Scalar(0), -v.x(), -v.y(), v.x(), Scalar(0);
  return s;
}

/// max |RᵀR − I| entry; zero for an exact rotation.
template <typename Scalar> Scalar orthonormality_error(const Matrix3<Scalar> &r) {
  return (r.transpose() * r - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff();
}

/// Nearest rotation matrix (polar factor) with det = +1.
template <typename Scalar> Matrix3<Scalar> orthonormalize(const Matrix3<Scalar> &m) {
  Eigen::JacobiSVD<Matrix3<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3<Scalar> u = svd.matrixU();
  const Matrix3<Scalar> v = svd.matrixV();
  if ((u * v.transpose()).determinant() < Scalar(0)) {
    u.col(2) = -u.col(2);
  }
  return u * v.transpose();
}

/// Rodrigues' formula for a unit axis.
template <typename Scalar> Matrix3<Scalar> axis_angle(const Vector3<Scalar> &unit_axis, Scalar angle) {
  const Matrix3<Scalar> k = skew(unit_axis);
  return Matrix3<Scalar>::Identity() + std::sin(angle) * k + (Scalar(1) - std::cos(angle)) * (k * k);
}

/// Exponential map so(3) -> SO(3).
template <typename Scalar> Matrix3<Scalar> exp_so3(const Vector3<Scalar> &rotation_vector) {
  const Scalar theta = rotation_vector.norm();
  const Matrix3<Scalar> k = skew(rotation_vector);
  Scalar a, b;
  if (theta < Scalar(1e-6)) {
    const Scalar t2 = theta * theta;
    a = Scalar(1) - t2 / Scalar(6);
    b = Scalar(0.5) - t2 / Scalar(24);
  } else {
    a = std::sin(theta) / theta;
    b = (Scalar(1) - std::cos(theta)) / (theta * theta);
  }
  return Matrix3<Scalar>::Identity() + a * k + b * (k * k);
}

/// Logarithm SO(3) -> rotation vector, principal branch (angle in [0, π]).
///
/// At exactly π the axis sign is undetermined; the axis whose first
/// non-negligible component is positive is returned.
template <typename Scalar> Vector3<Scalar> log_so3(const Matrix3<Scalar> &r) {
  const Scalar cos_theta = std::clamp((r.trace() - Scalar(1)) / Scalar(2), Scalar(-1), Scalar(1));
  const Vector3<Scalar> w{(r(2, 1) - r(1, 2)) / Scalar(2), (r(0, 2) - r(2, 0)) / Scalar(2),
                          (r(1, 0) - r(0, 1)) / Scalar(2)};
  const Scalar sin_theta = w.norm();
  const Scalar theta = std::atan2(sin_theta, cos_theta);

  if (theta < Scalar(1e-6)) {
    return w * (Scalar(1) + theta * theta / Scalar(6));
  }
  if (cos_theta > Scalar(-0.9)) {
    return w * (theta / sin_theta);
  }

  // Near π: the symmetric part carries the axis, (R + Rᵀ)/2 − cosθ·I = (1 − cosθ)·aaᵀ.
  const Matrix3<Scalar> b =
      (r + r.transpose()) / Scalar(2) - cos_theta * Matrix3<Scalar>::Identity();
  Eigen::Index k = 0;
  b.diagonal().maxCoeff(&k);
  Vector3<Scalar> axis = b.col(k).normalized();
  if (sin_theta > Scalar(1e-12)) {
    if (axis.dot(w) < Scalar(0)) {
      axis = -axis;
    }
  } else {
    for (Eigen::Index i = 0; i < 3; ++i) {
      if (std::abs(axis[i]) > Scalar(1e-12)) {
        if (axis[i] < Scalar(0)) {
          axis = -axis;
        }
        break;
      }
    }
  }
  return theta * axis;
}

/// Rotation angle in [0, π].
template <typename Scalar> Scalar rotation_angle(const Matrix3<Scalar> &r) { return log_so3(r).norm(); }

template <typename Scalar> PoseVector<Scalar> to_pose_vector(const Pose<Scalar> &p) {
  PoseVector<Scalar> v;
  v << p.translation, log_so3(p.rotation);
  return v;
}

template <typename Scalar> Pose<Scalar> from_pose_vector(const PoseVector<Scalar> &v) {
  return {exp_so3<Scalar>(v.template tail<3>()), v.template head<3>()};
}

/// Task-space error of `current` relative to `target`, both in world frame:
/// translation difference and the world-frame rotation vector of R_target·R_currentᵀ.
template <typename Scalar>
PoseVector<Scalar> pose_error(const Pose<Scalar> &target, const Pose<Scalar> &current) {
  PoseVector<Scalar> e;
  e << target.translation - current.translation,
      log_so3<Scalar>(target.rotation * current.rotation.transpose());
  return e;
}

/// Unit quaternion (any sign) to rotation matrix.
template <typename Scalar> Matrix3<Scalar> rotation_from_quaternion(Scalar w, Scalar x, Scalar y, Scalar z) {
  return Eigen::Quaternion<Scalar>(w, x, y, z).normalized().toRotationMatrix();
}

/// Rotation to unit quaternion (w, x, y, z) with w ≥ 0.
template <typename Scalar> Eigen::Matrix<Scalar, 4, 1> quaternion_wxyz(const Matrix3<Scalar> &r) {
  Eigen::Quaternion<Scalar> q(r);
  q.normalize();
  if (q.w() < Scalar(0)) {
    q.coeffs() = -q.coeffs();
  }
  return {q.w(), q.x(), q.y(), q.z()};
}

/// Wrap an angle into (−π, π].
template <typename Scalar> Scalar wrap_angle(Scalar a) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  constexpr Scalar two_pi = Scalar(2) * pi;
  if (a > -pi && a <= pi) {
    return a;
  }
  a = std::fmod(a + pi, two_pi);
  if (a <= Scalar(0)) {
    a += two_pi;
  }
  return a - pi;
}

} // namespace teletwin
