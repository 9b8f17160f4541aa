// Scripted operator runs frozen under fixtures/.
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "script.hpp"

namespace teletwin::script {

namespace {

using Eigen::Vector3d;

Vector3d center_of(const ScenarioDefinition &def, const std::string &id) {
  const int i = def.find(id);
  if (i < 0) {
    throw std::invalid_argument("fixture refers to unknown object " + id);
  }
  return def.objects[static_cast<std::size_t>(i)].anchor_point();
}

struct WristStyle {
  double approach;       // retreat distance from the ball centre (m)
  double speed;          // m/s
  double pause;          // hesitation before each approach (s)
  double tremor;         // zig-zag amplitude on every segment (m)
  std::vector<int> wall_hits; // repetitions that end by bumping the glass
};

// Touch the ball ten times, each from a different azimuth, backing out in between.
std::vector<InputFrame> wrist_run(const EngineConfig &cfg, const ScenarioDefinition &def, const WristStyle &style) {
  Script s(cfg, def);
  const Vector3d c = center_of(def, "ball");
  const double tilt = 50.0 * std::numbers::pi / 180.0;
  const auto &action = def.actions.front();

  auto travel = [&](const Vector3d &to) {
    if (style.tremor <= 0.0) {
      s.move_tip(Side::Right, to, style.speed);
      return;
    }
    const Vector3d from = s.tip(Side::Right);
    const Vector3d dir = to - from;
    Vector3d side = dir.cross(Vector3d::UnitZ());
    if (side.norm() < 1e-9) {
      side = Vector3d::UnitX();
    }
    side.normalize();
    const int wiggles = 4;
    for (int k = 1; k <= wiggles; ++k) {
      const double sign = (k % 2 == 0) ? -1.0 : 1.0;
      const Vector3d p = from + dir * (static_cast<double>(k) - 0.5) / wiggles + sign * style.tremor * side;
      s.move_tip(Side::Right, p, style.speed);
    }
    s.move_tip(Side::Right, to, style.speed);
  };

  for (int rep = 0; rep < action.repetitions; ++rep) {
    const double azimuth = action.parameters[static_cast<std::size_t>(rep)] * std::numbers::pi / 180.0;
    const Vector3d d(std::sin(tilt) * std::cos(azimuth), std::sin(tilt) * std::sin(azimuth), std::cos(tilt));
    if (style.pause > 0.0) {
      s.wait(style.pause);
    }
    travel(c + style.approach * d);
    travel(c + 0.003 * d);
    if (std::find(style.wall_hits.begin(), style.wall_hits.end(), rep) != style.wall_hits.end()) {
      const Vector3d radial(std::cos(azimuth), std::sin(azimuth), 0.0);
      travel(c + 0.0385 * radial + Vector3d(0.0, 0.0, 0.01));
    }
    travel(c + style.approach * d);
  }
  s.wait(0.2);
  return s.frames();
}

std::vector<InputFrame> clutch_run(const EngineConfig &cfg, const ScenarioDefinition &def) {
  Script s(cfg, def);
  const Vector3d home = s.tip(Side::Right);
  for (const char *ball : {"ball_near", "ball_far", "ball_low"}) {
    const Vector3d c = center_of(def, ball);
    const Vector3d above = c + Vector3d(0.0, 0.0, 0.02);
    s.move_tip_path(Side::Right, {above, c, above}, 0.05);
    // Hand back towards the middle of its workspace without moving the tip.
    const Vector3d hand_shift = (home - above) / cfg.teleop.motion_scale;
    s.clutch_reposition(Side::Right, hand_shift, 0.3);
  }
  s.wait(0.2);
  return s.frames();
}

std::vector<InputFrame> camera_run(const EngineConfig &cfg, const ScenarioDefinition &def) {
  Script s(cfg, def);
  s.wait(0.5);
  for (const auto &t : def.actions.front().targets) {
    s.aim_camera(center_of(def, t), 1.5);
    s.wait(0.3);
  }
  return s.frames();
}

std::vector<InputFrame> sea_spikes_run(const EngineConfig &cfg, const ScenarioDefinition &def) {
  Script s(cfg, def);
  s.aim_camera(center_of(def, "field_marker"), 1.5);
  auto touch = [&](Side side, const char *spike) {
    const Vector3d c = center_of(def, spike);
    const Vector3d above = c + Vector3d(0.0, 0.0, 0.02);
    s.move_tip_path(side, {above, c, above}, 0.04);
  };
  touch(Side::Left, "spike_1");
  touch(Side::Right, "spike_2");
  s.clutch_reposition(Side::Left, {0.0, 0.0, -0.08}, 0.3);
  touch(Side::Left, "spike_3");
  touch(Side::Right, "spike_4");
  s.wait(0.2);
  return s.frames();
}

void grasp_ring(Script &s, const ScenarioDefinition &def) {
  const Vector3d ring = center_of(def, "ring");
  s.move_tip_path(Side::Right, {ring + Vector3d(0.0, 0.0, 0.05), ring}, 0.04);
  s.set_grip(Side::Right, 1.0);
  s.wait(0.3);
}

std::vector<InputFrame> ring_transfer_run(const EngineConfig &cfg, const ScenarioDefinition &def) {
  Script s(cfg, def);
  grasp_ring(s, def);
  const Vector3d ring = center_of(def, "ring");
  const Box &goal = *def.objects[static_cast<std::size_t>(def.find("ring"))].placement_target;
  s.move_tip(Side::Right, {ring.x(), ring.y(), 0.13}, 0.02);
  s.move_tip_path(Side::Right, {Vector3d(goal.center.x(), goal.center.y(), 0.13), goal.center}, 0.04);
  s.set_grip(Side::Right, 0.0);
  s.wait(0.3);
  return s.frames();
}

// Yanks the grasped ring upwards in one frame while it is still on the tower.
std::vector<InputFrame> ring_detach_run(const EngineConfig &cfg, const ScenarioDefinition &def) {
  Script s(cfg, def);
  grasp_ring(s, def);
  s.jump_tip(Side::Right, s.tip(Side::Right) + Vector3d(0.0, 0.0, 0.03));
  s.wait(0.5);
  return s.frames();
}

} // namespace

std::vector<InputFrame> wrist_articulation_expert(const EngineConfig &cfg, const ScenarioDefinition &def) {
  return wrist_run(cfg, def, {0.02, 0.05, 0.0, 0.0, {}});
}

std::vector<InputFrame> wrist_articulation_intermediate(const EngineConfig &cfg, const ScenarioDefinition &def) {
  return wrist_run(cfg, def, {0.028, 0.03, 0.8, 0.002, {5}});
}

std::vector<InputFrame> wrist_articulation_novice(const EngineConfig &cfg, const ScenarioDefinition &def) {
  return wrist_run(cfg, def, {0.032, 0.015, 5.0, 0.004, {0, 5}});
}

const std::vector<Fixture> &fixtures() {
  static const std::vector<Fixture> all{
      {"wrist_articulation_1", "wrist_articulation_1", wrist_articulation_expert},
      {"wrist_articulation_1_intermediate", "wrist_articulation_1", wrist_articulation_intermediate},
      {"wrist_articulation_1_novice", "wrist_articulation_1", wrist_articulation_novice},
      {"clutch", "clutch", clutch_run},
      {"camera_0", "camera_0", camera_run},
      {"sea_spikes_1", "sea_spikes_1", sea_spikes_run},
      {"ring_tower_transfer_1", "ring_tower_transfer_1", ring_transfer_run},
      {"ring_tower_transfer_1_detach", "ring_tower_transfer_1", ring_detach_run},
  };
  return all;
}

const Fixture &fixture(const std::string &name) {
  for (const auto &f : fixtures()) {
    if (f.name == name) {
      return f;
    }
  }
  throw std::invalid_argument("unknown fixture " + name);
}

} // namespace teletwin::script
