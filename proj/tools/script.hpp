#pragma once

// Authoring of operator input logs. A Script tracks where the engine will
// put each end-effector target (the teleop mapping is replayed on the
// script side), so trajectories can be written in task space.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "teletwin/config.hpp"
#include "teletwin/input_log.hpp"
#include "teletwin/scenario.hpp"

namespace teletwin::script {

class Script {
public:
  Script(const EngineConfig &cfg, const ScenarioDefinition &def, std::int64_t period_ms = 50);

  /// Current end-effector target of an arm.
  const Eigen::Vector3d &tip(Side side) const { return target_[index(side)]; }
  double time() const { return static_cast<double>(t_ms_) / 1000.0; }

  void wait(double seconds);

  /// Straight tip motion at `speed` (m/s) through the teleop mapping.
  void move_tip(Side side, const Eigen::Vector3d &to, double speed);
  void move_tip_path(Side side, const std::vector<Eigen::Vector3d> &via, double speed);

  /// Puts the tip target at `to` within one frame: far too fast for the joints.
  void jump_tip(Side side, const Eigen::Vector3d &to);

  /// Moves the hand by `delta` while the clutch is held; the tip stays.
  void clutch_reposition(Side side, const Eigen::Vector3d &delta, double speed);

  void set_grip(Side side, double grip);

  /// Holds the camera pedal and turns the right hand until the view axis
  /// points at `point`, then releases the pedal.
  void aim_camera(const Eigen::Vector3d &point, double duration);

  /// Foot over a pedal and down (or back up).
  void press(PedalId pedal);
  void release(PedalId pedal);

  void set_foot_tracking(Side side, bool valid);

  std::vector<InputFrame> frames() const { return frames_; }

private:
  static std::size_t index(Side s) { return static_cast<std::size_t>(s); }
  void emit();
  void move_master(Side side, const Eigen::Vector3d &to_master, double duration);

  EngineConfig cfg_;
  ScenarioDefinition def_;
  std::int64_t period_ms_;
  std::int64_t t_ms_ = 0;
  InputFrame current_;
  std::array<Eigen::Vector3d, 2> target_;
  bool clutched_ = false;
  CameraState camera_;
  std::vector<InputFrame> frames_;
};

/// A scripted operator run on one scenario.
struct Fixture {
  std::string name;
  std::string scenario_id;
  std::function<std::vector<InputFrame>(const EngineConfig &, const ScenarioDefinition &)> build;
};

/// Every frozen fixture, in a fixed order.
const std::vector<Fixture> &fixtures();

const Fixture &fixture(const std::string &name);

/// The three operator skill levels on wrist_articulation_1, worst first.
std::vector<InputFrame> wrist_articulation_novice(const EngineConfig &cfg, const ScenarioDefinition &def);
std::vector<InputFrame> wrist_articulation_intermediate(const EngineConfig &cfg, const ScenarioDefinition &def);
std::vector<InputFrame> wrist_articulation_expert(const EngineConfig &cfg, const ScenarioDefinition &def);

} // namespace teletwin::script
