#pragma once

#include "teletwin/footboard.hpp"
#include "teletwin/pose.hpp"

namespace teletwin {

/// Master and end-effector frames captured at the same anchoring instant.
template <typename Scalar> struct TeleopAnchor {
  Pose<Scalar> master_initial;
  Pose<Scalar> ee_initial;
};

template <typename Scalar>
TeleopAnchor<Scalar> anchor(const Pose<Scalar> &master_pose, const Pose<Scalar> &ee_pose) {
  return {master_pose, ee_pose};
}

/// R_d = R_master(t) · R_master(0)ᵀ · R_ee(0), projected back onto SO(3).
template <typename Scalar, typename Derived>
Matrix3<Scalar> desired_orientation(const TeleopAnchor<Scalar> &a, const Eigen::MatrixBase<Derived> &master_now) {
  return orthonormalize<Scalar>(master_now * a.master_initial.rotation.transpose() * a.ee_initial.rotation);
}

/// p_d = p_ee(0) + alpha · (p_master(t) − p_master(0)).
template <typename Scalar, typename Derived>
Vector3<Scalar> desired_position(const TeleopAnchor<Scalar> &a, const Eigen::MatrixBase<Derived> &master_position_now,
                                 Scalar alpha) {
  return a.ee_initial.translation + alpha * (master_position_now - a.master_initial.translation);
}

template <typename Scalar> Pose<Scalar> desired_pose(const TeleopAnchor<Scalar> &a, const Pose<Scalar> &master_now, Scalar alpha) {
  return {desired_orientation(a, master_now.rotation), desired_position(a, master_now.translation, alpha)};
}

struct TeleopConfig {
  double motion_scale = 0.25;         // alpha, translation only
  double camera_rotation_scale = 0.5; // fraction of master rotation applied to the camera
  double grip_close_threshold = 0.8;

  void validate() const;
};

enum class ArmMode { Following, Clutched, CameraDriving };

const char *to_string(ArmMode m);

struct ArmTeleopState {
  TeleopAnchor<double> anchor;
  ArmMode mode = ArmMode::Following;
  Posed ee_target;
  double grip_command = 0.0; // 0 open, 1 jaws closed
};

struct CameraState {
  Posed pose;
  bool thirty_degree_mode = false;
  /// Master and camera frames captured when camera driving began.
  TeleopAnchor<double> anchor;
};

struct TeleopStep {
  ArmTeleopState arm;
  CameraState camera;
};

/// Arm state anchored at (master, ee) with the target at the current EE pose.
ArmTeleopState initial_arm_state(const Posed &master_pose, const Posed &ee_pose);

/// One teleoperation tick for one arm.
///
/// The mode follows the pedals: camera pedal → CameraDriving, else clutch →
/// Clutched, else Following. Outside Following the target and grip are
/// frozen. Returning to Following re-anchors at the current master pose and
/// the frozen target. Only the arm with `drives_camera` moves the camera.
TeleopStep step_teleop(const ArmTeleopState &state, const CameraState &camera, const Posed &master_pose,
                       double grip_input, const PedalState &pedals, const TeleopConfig &cfg, bool drives_camera);

/// Flips the 30-degree view on a press edge; pose unchanged.
CameraState toggle_thirty_degree(CameraState camera, bool pedal_edge);

} // namespace teletwin
