#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "teletwin/config.hpp"
#include "teletwin/events.hpp"
#include "teletwin/input_log.hpp"
#include "teletwin/scenario.hpp"
#include "teletwin/scoring.hpp"

namespace teletwin {

struct ArmRuntime {
  JointVectord theta = JointVectord::Zero();
  ArmTeleopState teleop;
  Posed master;             // last valid master pose
  double grip_input = 0.0;  // last valid grip
  Posed ee_actual;
  std::array<Posed, kChainJoints + 1> frames{};
  IkStatus ik_status = IkStatus::Converged;
  int ik_iterations = 0;
  double force = 0.0;
};

struct SessionState {
  std::int64_t tick = 0; // completed ticks
  bool anchored = false;
  std::array<ArmRuntime, 2> arms{};
  CameraState camera;
  PedalState pedals;
  std::array<FootSample, 2> feet{};
  ScenarioState scenario;
  EfficiencyState efficiency;
  std::vector<SessionEvent> events; // full history, in emission order
  bool halted = false;
};

SessionState start_session(const EngineConfig &cfg, const ScenarioDefinition &def);

struct ArmSnapshot {
  Side side = Side::Left;
  ArmMode mode = ArmMode::Following;
  JointVectord theta = JointVectord::Zero();
  Posed ee_actual;
  Posed ee_target;
  double grip = 0.0;
  IkStatus ik_status = IkStatus::Converged;
  int ik_iterations = 0;
  double force = 0.0;
  std::array<Eigen::Vector3d, kChainJoints + 2> skeleton{}; // base, joints, tool tip
};

struct ObjectSnapshot {
  std::string id;
  std::string shape;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  std::optional<Side> held_by;
  bool mounted = false;
  bool placed = false;
};

struct ProgressSnapshot {
  std::string action_id;
  std::string action_kind;
  int action_index = 0;
  int action_count = 0;
  int repetition = 0;
  int repetitions = 0;
  std::string target;
  std::optional<double> parameter;
  bool completed = false;
  bool failed = false;
};

/// Immutable view of the session after a tick, streamed to the console.
struct StateSnapshot {
  std::int64_t tick = 0;
  double t_ms = 0.0; // simulated time since session start
  std::array<ArmSnapshot, 2> arms{};
  Posed camera_pose;
  bool camera_thirty_degree = false;
  Eigen::Vector3d camera_view_axis = Eigen::Vector3d::UnitZ();
  std::array<bool, kPedalCount> pedals{};
  MinimapModel minimap;
  std::vector<ObjectSnapshot> objects;
  ProgressSnapshot progress;
  ScoreBreakdown score; // live preview
};

StateSnapshot make_snapshot(const SessionState &state, const EngineConfig &cfg, const ScenarioDefinition &def);

/// Canonical single-line JSON.
std::string snapshot_json(const StateSnapshot &snapshot);
std::string event_json(const SessionEvent &event);

struct TickOutput {
  SessionState state;
  std::vector<SessionEvent> events;
  StateSnapshot snapshot;
};

/// One fixed step: pedals → teleop → IK → joint smoothing → forward
/// kinematics → scenario events → efficiency accumulation.
TickOutput tick(SessionState state, const InputFrame &frame, const EngineConfig &cfg, const ScenarioDefinition &def);

/// Score of a running session: incomplete sessions get the provisional
/// total instead of zero.
ScoreBreakdown live_score(const SessionState &state, const ScenarioDefinition &def);

/// Resamples a timestamped frame stream onto the fixed tick grid
/// (sample-and-hold) and drives `tick`. Replay and the live service share it.
class SessionDriver {
public:
  using Sink = std::function<void(const std::vector<SessionEvent> &, const StateSnapshot &)>;
  enum class PushResult { Accepted, OutOfOrder, Halted };

  SessionDriver(EngineConfig cfg, ScenarioDefinition def, std::string session_id);

  /// Runs every tick strictly before `frame.t_ms` on the held frame, then holds `frame`.
  PushResult push(const InputFrame &frame, const Sink &sink = {});

  /// Runs the remaining ticks up to and including the held frame's time.
  void finish(const Sink &sink = {});

  bool halted() const { return state_.halted; }
  const SessionState &state() const { return state_; }
  const ScenarioDefinition &scenario() const { return def_; }
  const EngineConfig &config() const { return cfg_; }
  const std::string &session_id() const { return session_id_; }

  StateSnapshot snapshot() const { return make_snapshot(state_, cfg_, def_); }
  ScoreBreakdown score() const;
  ReportMetadata metadata() const;
  std::string report() const { return export_report(score(), metadata()); }

private:
  void run_until(std::int64_t limit_us, bool inclusive, const Sink &sink);

  EngineConfig cfg_;
  ScenarioDefinition def_;
  std::string session_id_;
  SessionState state_;
  std::optional<InputFrame> held_;
  std::int64_t start_us_ = 0;
};

} // namespace teletwin
