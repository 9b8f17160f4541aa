#include "teletwin/teleop.hpp"

#include <algorithm>
#include <stdexcept>

namespace teletwin {

void TeleopConfig::validate() const {
  if (!(motion_scale > 0.0) || motion_scale > 1.0) {
    throw std::invalid_argument("teleop: motion_scale must be in (0, 1]");
  }
  if (!(camera_rotation_scale > 0.0)) {
    throw std::invalid_argument("teleop: camera_rotation_scale must be positive");
  }
  if (grip_close_threshold < 0.0 || grip_close_threshold > 1.0) {
    throw std::invalid_argument("teleop: grip_close_threshold must be in [0, 1]");
  }
}

const char *to_string(ArmMode m) {
  switch (m) {
  case ArmMode::Following:
    return "following";
  case ArmMode::Clutched:
    return "clutched";
  case ArmMode::CameraDriving:
    return "camera_driving";
  }
  return "unknown";
}

ArmTeleopState initial_arm_state(const Posed &master_pose, const Posed &ee_pose) {
  ArmTeleopState s;
  s.anchor = anchor(master_pose, ee_pose);
  s.mode = ArmMode::Following;
  s.ee_target = ee_pose;
  return s;
}

TeleopStep step_teleop(const ArmTeleopState &state, const CameraState &camera, const Posed &master_pose,
                       double grip_input, const PedalState &pedals, const TeleopConfig &cfg, bool drives_camera) {
  ArmMode mode = ArmMode::Following;
  if (pedals.is_pressed(PedalId::Camera)) {
    mode = ArmMode::CameraDriving;
  } else if (pedals.is_pressed(PedalId::Clutch)) {
    mode = ArmMode::Clutched;
  }

  TeleopStep out{state, camera};
  out.arm.mode = mode;

  switch (mode) {
  case ArmMode::Following:
    if (state.mode != ArmMode::Following) {
      out.arm.anchor = anchor(master_pose, state.ee_target);
    }
    out.arm.ee_target = desired_pose(out.arm.anchor, master_pose, cfg.motion_scale);
    out.arm.grip_command = std::clamp(grip_input, 0.0, 1.0);
    break;
  case ArmMode::Clutched:
    break;
  case ArmMode::CameraDriving:
    if (!drives_camera) {
      break;
    }
    if (state.mode != ArmMode::CameraDriving) {
      out.camera.anchor = anchor(master_pose, camera.pose);
    }
    {
      const TeleopAnchor<double> &a = out.camera.anchor;
      const Eigen::Vector3d master_rotation =
          log_so3<double>(master_pose.rotation * a.master_initial.rotation.transpose());
      out.camera.pose.rotation =
          orthonormalize<double>(exp_so3<double>(cfg.camera_rotation_scale * master_rotation) * a.ee_initial.rotation);
      out.camera.pose.translation = desired_position(a, master_pose.translation, cfg.motion_scale);
    }
    break;
  }
  return out;
}

CameraState toggle_thirty_degree(CameraState camera, bool pedal_edge) {
  if (pedal_edge) {
    camera.thirty_degree_mode = !camera.thirty_degree_mode;
  }
  return camera;
}

} // namespace teletwin
