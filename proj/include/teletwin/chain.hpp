#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "teletwin/pose.hpp"

namespace teletwin {

inline constexpr int kChainJoints = 6;

template <typename Scalar> using JointVector = Vector6<Scalar>;
using JointVectord = JointVector<double>;

/// Revolute joint: fixed parent-to-joint offset followed by a rotation about `axis`
/// (unit vector expressed in the joint frame).
template <typename Scalar> struct Joint {
  Vector3<Scalar> axis = Vector3<Scalar>::UnitZ();
  Pose<Scalar> offset;
};

/// Six-joint all-revolute serial arm.
template <typename Scalar> struct KinematicChain {
  std::array<Joint<Scalar>, kChainJoints> joints;
  Pose<Scalar> tool;
  JointVector<Scalar> lower = JointVector<Scalar>::Constant(-std::numbers::pi_v<Scalar>);
  JointVector<Scalar> upper = JointVector<Scalar>::Constant(std::numbers::pi_v<Scalar>);
  JointVector<Scalar> home = JointVector<Scalar>::Zero();

  template <typename Other> KinematicChain<Other> cast() const {
    KinematicChain<Other> c;
    for (int i = 0; i < kChainJoints; ++i) {
      c.joints[i].axis = joints[i].axis.template cast<Other>();
      c.joints[i].offset = joints[i].offset.template cast<Other>();
    }
    c.tool = tool.template cast<Other>();
    c.lower = lower.template cast<Other>();
    c.upper = upper.template cast<Other>();
    c.home = home.template cast<Other>();
    return c;
  }
};

using KinematicChaind = KinematicChain<double>;

/// Throws std::invalid_argument when an axis is not unit length, a limit
/// interval is empty, or the home configuration lies outside the limits.
template <typename Scalar> void validate_chain(const KinematicChain<Scalar> &chain) {
  for (int i = 0; i < kChainJoints; ++i) {
    const auto &j = chain.joints[i];
    if (!j.axis.allFinite() || std::abs(j.axis.norm() - Scalar(1)) > Scalar(1e-12)) {
      throw std::invalid_argument("joint " + std::to_string(i + 1) + ": axis must have unit norm");
    }
    if (!(chain.lower[i] < chain.upper[i])) {
      throw std::invalid_argument("joint " + std::to_string(i + 1) + ": lower limit must be below upper limit");
    }
    if (chain.home[i] < chain.lower[i] || chain.home[i] > chain.upper[i]) {
      throw std::invalid_argument("joint " + std::to_string(i + 1) + ": home angle outside limits");
    }
    if (orthonormality_error(j.offset.rotation) > Scalar(1e-9)) {
      throw std::invalid_argument("joint " + std::to_string(i + 1) + ": offset rotation is not orthonormal");
    }
  }
}

/// Default arm: yaw/pitch shoulder, pitch elbow, roll-pitch-roll wrist.
/// Link lengths 0.30/0.25/0.05/0.05/0.04 m. The elbow and wrist pitch carry
/// fixed bends so the zero configuration is away from singularities.
template <typename Scalar> KinematicChain<Scalar> default_chain(const Pose<Scalar> &base = Pose<Scalar>::Identity()) {
  using P = Pose<Scalar>;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Vector3<Scalar> x = Vector3<Scalar>::UnitX();
  const Vector3<Scalar> y = Vector3<Scalar>::UnitY();
  const Vector3<Scalar> z = Vector3<Scalar>::UnitZ();

  KinematicChain<Scalar> c;
  c.joints[0] = {z, base};
  c.joints[1] = {y, P::Identity()};
  c.joints[2] = {y, P::Translation({Scalar(0.30), 0, 0}) * P::Rotation(axis_angle<Scalar>(y, pi / 2))};
  c.joints[3] = {x, P::Translation({Scalar(0.25), 0, 0})};
  c.joints[4] = {y, P::Translation({Scalar(0.05), 0, 0}) * P::Rotation(axis_angle<Scalar>(y, pi / 4))};
  c.joints[5] = {x, P::Translation({Scalar(0.05), 0, 0})};
  c.tool = P::Translation({Scalar(0.04), 0, 0});
  c.lower = JointVector<Scalar>::Constant(Scalar(-2.6));
  c.upper = JointVector<Scalar>::Constant(Scalar(2.6));
  c.lower[5] = -pi;
  c.upper[5] = pi;
  c.home = JointVector<Scalar>::Zero();
  return c;
}

/// Upper bound on the distance from the first joint's origin to the tool tip.
template <typename Scalar> Scalar max_reach(const KinematicChain<Scalar> &chain) {
  Scalar reach = chain.tool.translation.norm();
  for (int i = 1; i < kChainJoints; ++i) {
    reach += chain.joints[i].offset.translation.norm();
  }
  return reach;
}

template <typename Scalar>
Pose<Scalar> forward_kinematics(const KinematicChain<Scalar> &chain, const JointVector<Scalar> &theta) {
  Pose<Scalar> t;
  for (int i = 0; i < kChainJoints; ++i) {
    const auto &j = chain.joints[i];
    t = t * j.offset * Pose<Scalar>::Rotation(axis_angle<Scalar>(j.axis, theta[i]));
  }
  return t * chain.tool;
}

/// World poses of each link frame (after its joint rotation) followed by the tool tip.
template <typename Scalar>
std::array<Pose<Scalar>, kChainJoints + 1> joint_frames(const KinematicChain<Scalar> &chain,
                                                        const JointVector<Scalar> &theta) {
  std::array<Pose<Scalar>, kChainJoints + 1> frames;
  Pose<Scalar> t;
  for (int i = 0; i < kChainJoints; ++i) {
    const auto &j = chain.joints[i];
    t = t * j.offset * Pose<Scalar>::Rotation(axis_angle<Scalar>(j.axis, theta[i]));
    frames[i] = t;
  }
  frames[kChainJoints] = t * chain.tool;
  return frames;
}

/// World-frame geometric Jacobian; rows follow the PoseVector layout (linear, angular).
template <typename Scalar>
Matrix6<Scalar> geometric_jacobian(const KinematicChain<Scalar> &chain, const JointVector<Scalar> &theta) {
  std::array<Vector3<Scalar>, kChainJoints> origins;
  std::array<Vector3<Scalar>, kChainJoints> axes;
  Pose<Scalar> t;
  for (int i = 0; i < kChainJoints; ++i) {
    const auto &j = chain.joints[i];
    t = t * j.offset;
    origins[i] = t.translation;
    axes[i] = t.rotation * j.axis;
    t = t * Pose<Scalar>::Rotation(axis_angle<Scalar>(j.axis, theta[i]));
  }
  const Vector3<Scalar> tip = (t * chain.tool).translation;

  Matrix6<Scalar> jac;
  for (int i = 0; i < kChainJoints; ++i) {
    jac.template block<3, 1>(0, i) = axes[i].cross(tip - origins[i]);
    jac.template block<3, 1>(3, i) = axes[i];
  }
  return jac;
}

/// Central-difference Jacobian of forward kinematics, differenced through pose_error.
template <typename Scalar>
Matrix6<Scalar> numeric_jacobian(const KinematicChain<Scalar> &chain, const JointVector<Scalar> &theta, Scalar h) {
  if (!(h > Scalar(0))) {
    throw std::invalid_argument("numeric_jacobian: step must be positive");
  }
  Matrix6<Scalar> jac;
  for (int i = 0; i < kChainJoints; ++i) {
    JointVector<Scalar> plus = theta;
    JointVector<Scalar> minus = theta;
    plus[i] += h;
    minus[i] -= h;
    jac.col(i) = pose_error(forward_kinematics(chain, plus), forward_kinematics(chain, minus)) / (Scalar(2) * h);
  }
  return jac;
}

template <typename Scalar>
JointVector<Scalar> clamp_to_limits(const KinematicChain<Scalar> &chain, const JointVector<Scalar> &theta) {
  return theta.cwiseMax(chain.lower).cwiseMin(chain.upper);
}

template <typename Scalar>
bool within_limits(const KinematicChain<Scalar> &chain, const JointVector<Scalar> &theta) {
  return (theta.array() >= chain.lower.array()).all() && (theta.array() <= chain.upper.array()).all();
}

/// Moves each joint toward `desired` by at most rate_limit·dt; lands exactly on
/// `desired` once within reach.
template <typename Scalar>
JointVector<Scalar> smooth_joint_step(const JointVector<Scalar> &current, const JointVector<Scalar> &desired, Scalar dt,
                                      Scalar rate_limit) {
  if (!(dt > Scalar(0))) {
    throw std::invalid_argument("smooth_joint_step: dt must be positive");
  }
  const Scalar max_step = rate_limit * dt;
  JointVector<Scalar> next;
  for (int i = 0; i < kChainJoints; ++i) {
    const Scalar gap = desired[i] - current[i];
    next[i] = std::abs(gap) <= max_step ? desired[i] : current[i] + std::copysign(max_step, gap);
  }
  return next;
}

} // namespace teletwin
