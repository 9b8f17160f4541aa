#include "script.hpp"

#include <cmath>
#include <stdexcept>

namespace teletwin::script {

namespace {

constexpr double kRestHeight = 0.1;

Side foot_for(PedalId p) {
  switch (p) {
  case PedalId::Clutch:
  case PedalId::Switch:
  case PedalId::ThirtyDegree:
    return Side::Left;
  default:
    return Side::Right;
  }
}

int steps_for(double seconds, std::int64_t period_ms) {
  return std::max(1, static_cast<int>(std::ceil(seconds * 1000.0 / static_cast<double>(period_ms) - 1e-9)));
}

} // namespace

Script::Script(const EngineConfig &cfg, const ScenarioDefinition &def, std::int64_t period_ms)
    : cfg_(cfg), def_(def), period_ms_(period_ms) {
  current_.masters[0].position = {0.0, 0.2, 1.0};
  current_.masters[1].position = {0.0, -0.2, 1.0};
  for (int a = 0; a < 2; ++a) {
    target_[a] = forward_kinematics(cfg_.chains[a], cfg_.chains[a].home).translation;
  }
  camera_.pose = def_.camera.pose;
  emit();
}

void Script::emit() {
  current_.t_ms = t_ms_;
  frames_.push_back(current_);
  t_ms_ += period_ms_;
}

void Script::wait(double seconds) {
  const int n = steps_for(seconds, period_ms_);
  for (int i = 0; i < n; ++i) {
    emit();
  }
}

void Script::move_master(Side side, const Eigen::Vector3d &to_master, double duration) {
  MasterSample &m = current_.masters[index(side)];
  const Eigen::Vector3d from = m.position;
  const Eigen::Vector3d target0 = target_[index(side)];
  const int n = steps_for(duration, period_ms_);
  for (int k = 1; k <= n; ++k) {
    m.position = from + (to_master - from) * (static_cast<double>(k) / n);
    if (!clutched_) {
      target_[index(side)] = target0 + cfg_.teleop.motion_scale * (m.position - from);
    }
    emit();
  }
}

void Script::move_tip(Side side, const Eigen::Vector3d &to, double speed) {
  const Eigen::Vector3d delta = to - tip(side);
  const Eigen::Vector3d master = current_.masters[index(side)].position + delta / cfg_.teleop.motion_scale;
  move_master(side, master, delta.norm() / speed);
}

void Script::move_tip_path(Side side, const std::vector<Eigen::Vector3d> &via, double speed) {
  for (const auto &p : via) {
    move_tip(side, p, speed);
  }
}

void Script::jump_tip(Side side, const Eigen::Vector3d &to) {
  MasterSample &m = current_.masters[index(side)];
  m.position += (to - tip(side)) / cfg_.teleop.motion_scale;
  target_[index(side)] = to;
  emit();
}

void Script::clutch_reposition(Side side, const Eigen::Vector3d &delta, double speed) {
  press(PedalId::Clutch);
  clutched_ = true;
  move_master(side, current_.masters[index(side)].position + delta, delta.norm() / speed);
  clutched_ = false;
  release(PedalId::Clutch);
}

void Script::set_grip(Side side, double grip) {
  current_.masters[index(side)].grip = grip;
  emit();
}

void Script::press(PedalId pedal) {
  const PedalRegion *r = cfg_.pedals.find(pedal);
  if (!r) {
    throw std::invalid_argument("pedal not in layout");
  }
  FootSample &f = current_.feet[index(foot_for(pedal))];
  f.planar_position = r->area.center();
  f.height = 0.0;
  emit();
}

void Script::release(PedalId pedal) {
  const Side s = foot_for(pedal);
  current_.feet[index(s)] = InputFrame{}.feet[index(s)];
  current_.feet[index(s)].height = kRestHeight;
  emit();
}

void Script::set_foot_tracking(Side side, bool valid) {
  current_.feet[index(side)].tracking_valid = valid;
  emit();
}

void Script::aim_camera(const Eigen::Vector3d &point, double duration) {
  press(PedalId::Camera);
  MasterSample &m = current_.masters[index(Side::Right)];
  const Eigen::Matrix3d master0 = m.pose().rotation;
  const Eigen::Vector3d axis = view_axis(camera_);
  const Eigen::Vector3d want = (point - camera_.pose.translation).normalized();
  const Eigen::Vector3d cross = axis.cross(want);
  const double angle = std::atan2(cross.norm(), axis.dot(want));
  const Eigen::Vector3d rv = cross.norm() > 0.0 ? Eigen::Vector3d(cross.normalized() * angle) : Eigen::Vector3d::Zero();
  const double s = cfg_.teleop.camera_rotation_scale;
  const Eigen::Matrix3d camera0 = camera_.pose.rotation;
  const int n = steps_for(duration, period_ms_);
  for (int k = 1; k <= n; ++k) {
    const Eigen::Matrix3d r = exp_so3<double>(rv * (static_cast<double>(k) / n / s)) * master0;
    m.orientation = quaternion_wxyz<double>(r);
    emit();
  }
  const Eigen::Matrix3d master1 = m.pose().rotation;
  camera_.pose.rotation = exp_so3<double>(s * log_so3<double>(master1 * master0.transpose())) * camera0;
  release(PedalId::Camera);
}

} // namespace teletwin::script
