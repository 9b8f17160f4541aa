#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "teletwin/events.hpp"
#include "teletwin/pose.hpp"
#include "teletwin/scoring.hpp"
#include "teletwin/teleop.hpp"

namespace teletwin {

struct Sphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.01;
};

/// Hollow box: walls of `thickness` inside the outer half extents.
struct Shell {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half_extents = Eigen::Vector3d::Constant(0.04);
  double thickness = 0.003;
};

struct Ring {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.015;
};

/// Vertical wire tower standing on `base`.
struct Tower {
  Eigen::Vector3d base = Eigen::Vector3d::Zero();
  double height = 0.05;
  double detach_force = 5.0;
};

using Shape = std::variant<Sphere, Shell, Ring, Tower>;

const char *shape_name(const Shape &s);

struct Box {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half_extents = Eigen::Vector3d::Zero();

  bool contains(const Eigen::Vector3d &p) const {
    return ((p - center).cwiseAbs().array() <= half_extents.array()).all();
  }
};

struct SceneObject {
  std::string id;
  Shape shape;
  bool grabbable = false;
  double grasp_radius = 0.0;
  std::optional<Box> placement_target;
  /// Tower this object is threaded on at scenario start.
  std::optional<std::string> mounted_on;

  /// Reference point: sphere/ring/shell center, tower base.
  Eigen::Vector3d anchor_point() const;
};

enum class ActionKind { Place, Touch, Transfer, CameraAim };

const char *to_string(ActionKind k);

struct ActionNode {
  std::string id;
  ActionKind kind = ActionKind::Touch;
  std::vector<std::string> targets;
  int repetitions = 1;
  /// Optional per-repetition parameter (e.g. approach angle), reported to the UI.
  std::vector<double> parameters;
  /// CameraAim only: angular tolerance between the view axis and the target (rad).
  double tolerance = 0.1;

  /// Target object for repetition `rep` (targets are cycled).
  const std::string &target_for(int rep) const { return targets[static_cast<std::size_t>(rep) % targets.size()]; }
};

struct CameraSetup {
  Posed pose;                   // optical axis is the local +z axis
  double view_half_angle = 0.6; // rad
};

struct ScenarioDefinition {
  std::string id;
  std::string title;
  std::vector<std::string> instructions;
  std::vector<ActionNode> actions;
  std::vector<SceneObject> objects;
  ScoreThresholds thresholds;
  PenaltyWeights weights;
  CameraSetup camera;

  /// Index into `objects`, or -1.
  int find(std::string_view object_id) const;
};

/// Parses and validates a scenario document (JSON). Throws ScenarioError
/// naming the offending field.
ScenarioDefinition load_scenario(std::string_view document);

/// Camera optical axis in world frame; the 30-degree view tilts it about the
/// camera's local x axis.
Eigen::Vector3d view_axis(const CameraState &camera);

inline constexpr double kThirtyDegreeTilt = 0.5235987755982988; // rad

/// Virtual-spring contact force estimate from tracking error.
double force_proxy(const Posed &ee_target, const Posed &ee_actual, double stiffness);

struct ObjectState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  std::optional<Side> held_by;
  Eigen::Vector3d grasp_offset = Eigen::Vector3d::Zero();
  bool mounted = false;
  bool placed = false;
};

/// Mutable runtime of one scenario attempt; owned by its session loop.
struct ScenarioState {
  std::vector<ObjectState> objects;
  std::vector<bool> touchable; // targets of some Touch action
  std::array<std::vector<bool>, 2> inside{};  // per tip, per object: within touch sphere
  std::array<std::vector<bool>, 2> in_wall{}; // per tip, per object: inside a shell wall
  std::array<std::optional<std::size_t>, 2> holding{};
  std::array<int, 2> force_ticks{};           // consecutive ticks above the force limit
  std::array<bool, 2> force_reported{};
  std::array<bool, 2> out_of_view{};
  bool goal_latched = false; // Place / CameraAim hysteresis
  std::size_t action_index = 0;
  int repetition = 0;
  bool halted = false;
  bool failed = false;
};

ScenarioState start_scenario(const ScenarioDefinition &def);

struct ArmContact {
  Posed ee_actual;
  Posed ee_target;
  double grip_command = 0.0;
};

struct StepContext {
  std::int64_t tick = 0;
  double dt = 0.01;
  double grip_close_threshold = 0.8;
  double stiffness = 500.0;
};

/// Converts end-effector interactions of one tick into ordered events and
/// advances the action graph. A halted scenario returns no events.
std::vector<SessionEvent> step_session(ScenarioState &state, const ScenarioDefinition &def,
                                       std::span<const ArmContact, 2> arms, const CameraState &camera,
                                       const StepContext &ctx);

} // namespace teletwin
