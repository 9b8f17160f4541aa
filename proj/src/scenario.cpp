#include "teletwin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json_io.hpp"
#include "teletwin/errors.hpp"

namespace teletwin {

namespace {

using json_io::FieldIssue;
using json_io::IssueKind;
using json_io::join;
using nlohmann::json;

constexpr double kForceEpisodeSeconds = 0.05;

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

Shape parse_shape(const json &j, const std::string &path) {
  json_io::expect_object(j, path);
  const std::string kind = json_io::string(json_io::require(j, "kind", path), join(path, "kind"));
  if (kind == "sphere") {
    json_io::check_keys(j, {"kind", "center", "radius"}, path);
    return Sphere{json_io::vector<3>(json_io::require(j, "center", path), join(path, "center")),
                  json_io::positive(json_io::require(j, "radius", path), join(path, "radius"))};
  }
  if (kind == "shell") {
    json_io::check_keys(j, {"kind", "center", "half_extents", "thickness"}, path);
    Shell s;
    s.center = json_io::vector<3>(json_io::require(j, "center", path), join(path, "center"));
    s.half_extents = json_io::vector<3>(json_io::require(j, "half_extents", path), join(path, "half_extents"));
    s.thickness = json_io::positive(json_io::require(j, "thickness", path), join(path, "thickness"));
    if ((s.half_extents.array() <= s.thickness).any()) {
      throw FieldIssue(IssueKind::InvalidValue, join(path, "half_extents"), "must exceed the wall thickness");
    }
    return s;
  }
  if (kind == "ring") {
    json_io::check_keys(j, {"kind", "center", "radius"}, path);
    return Ring{json_io::vector<3>(json_io::require(j, "center", path), join(path, "center")),
                json_io::positive(json_io::require(j, "radius", path), join(path, "radius"))};
  }
  if (kind == "tower") {
    json_io::check_keys(j, {"kind", "base", "height", "detach_force"}, path);
    return Tower{json_io::vector<3>(json_io::require(j, "base", path), join(path, "base")),
                 json_io::positive(json_io::require(j, "height", path), join(path, "height")),
                 json_io::positive(json_io::require(j, "detach_force", path), join(path, "detach_force"))};
  }
  throw ScenarioError(ScenarioError::Kind::UnknownShape, join(path, "kind"), "unknown shape kind '" + kind + "'");
}

Box parse_box(const json &j, const std::string &path) {
  json_io::check_keys(j, {"center", "half_extents"}, path);
  Box b;
  b.center = json_io::vector<3>(json_io::require(j, "center", path), join(path, "center"));
  b.half_extents = json_io::vector<3>(json_io::require(j, "half_extents", path), join(path, "half_extents"));
  if ((b.half_extents.array() <= 0.0).any()) {
    throw FieldIssue(IssueKind::InvalidValue, join(path, "half_extents"), "must be positive");
  }
  return b;
}

double default_grasp_radius(const Shape &shape) {
  return std::visit(overloaded{[](const Sphere &s) { return s.radius + 0.005; },
                               [](const Ring &r) { return r.radius + 0.005; },
                               [](const auto &) { return 0.01; }},
                    shape);
}

SceneObject parse_object(const json &j, const std::string &path) {
  json_io::check_keys(j, {"id", "shape", "grabbable", "grasp_radius", "placement_target", "mounted_on"}, path);
  SceneObject o;
  o.id = json_io::string(json_io::require(j, "id", path), join(path, "id"));
  o.shape = parse_shape(json_io::require(j, "shape", path), join(path, "shape"));
  if (j.contains("grabbable")) {
    o.grabbable = json_io::boolean(j["grabbable"], join(path, "grabbable"));
  }
  if (j.contains("grasp_radius")) {
    o.grasp_radius = json_io::positive(j["grasp_radius"], join(path, "grasp_radius"));
  } else if (o.grabbable) {
    o.grasp_radius = default_grasp_radius(o.shape);
  }
  if (j.contains("placement_target")) {
    o.placement_target = parse_box(j["placement_target"], join(path, "placement_target"));
  }
  if (j.contains("mounted_on")) {
    o.mounted_on = json_io::string(j["mounted_on"], join(path, "mounted_on"));
  }
  return o;
}

ActionKind parse_action_kind(const json &j, const std::string &path) {
  const std::string kind = json_io::string(j, path);
  if (kind == "place") {
    return ActionKind::Place;
  }
  if (kind == "touch") {
    return ActionKind::Touch;
  }
  if (kind == "transfer") {
    return ActionKind::Transfer;
  }
  if (kind == "camera_aim") {
    return ActionKind::CameraAim;
  }
  throw FieldIssue(IssueKind::InvalidValue, path, "unknown action kind '" + kind + "'");
}

ActionNode parse_action(const json &j, const std::string &path, std::size_t index) {
  json_io::check_keys(j, {"id", "kind", "targets", "repetitions", "parameters", "tolerance"}, path);
  ActionNode a;
  a.id = j.contains("id") ? json_io::string(j["id"], join(path, "id")) : "action" + std::to_string(index + 1);
  a.kind = parse_action_kind(json_io::require(j, "kind", path), join(path, "kind"));
  a.targets = json_io::strings(json_io::require(j, "targets", path), join(path, "targets"));
  if (a.targets.empty()) {
    throw FieldIssue(IssueKind::InvalidValue, join(path, "targets"), "must name at least one object");
  }
  if (j.contains("repetitions")) {
    const auto reps = json_io::integer(j["repetitions"], join(path, "repetitions"));
    if (reps < 1 || reps > 1000000) {
      throw FieldIssue(IssueKind::InvalidValue, join(path, "repetitions"), "must be at least 1");
    }
    a.repetitions = static_cast<int>(reps);
  }
  if (j.contains("parameters")) {
    a.parameters = json_io::numbers(j["parameters"], join(path, "parameters"));
    if (a.parameters.size() != static_cast<std::size_t>(a.repetitions)) {
      throw FieldIssue(IssueKind::InvalidValue, join(path, "parameters"), "needs one entry per repetition");
    }
  }
  if (j.contains("tolerance")) {
    a.tolerance = json_io::positive(j["tolerance"], join(path, "tolerance"));
  }
  return a;
}

ScoreThresholds parse_thresholds(const json &j, const std::string &path) {
  json_io::check_keys(j, {"time_budget", "motion_budget", "force_limit", "time_slope", "motion_slope"}, path);
  ScoreThresholds t;
  auto read = [&](const char *key, double &out) {
    if (j.contains(key)) {
      out = json_io::positive(j[key], join(path, key));
    }
  };
  read("time_budget", t.time_budget);
  read("motion_budget", t.motion_budget);
  read("force_limit", t.force_limit);
  read("time_slope", t.time_slope);
  read("motion_slope", t.motion_slope);
  return t;
}

PenaltyWeights parse_weights(const json &j, const std::string &path) {
  json_io::check_keys(j, {"drop", "excessive_force", "glass_break", "out_of_view", "immediate_fail"}, path);
  PenaltyWeights w;
  auto read = [&](const char *key, double &out) {
    if (j.contains(key)) {
      out = json_io::number(j[key], join(path, key));
    }
  };
  read("drop", w.drop);
  read("excessive_force", w.excessive_force);
  read("glass_break", w.glass_break);
  read("out_of_view", w.out_of_view);
  if (j.contains("immediate_fail")) {
    w.immediate_fail.clear();
    const auto names = json_io::strings(j["immediate_fail"], join(path, "immediate_fail"));
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto kind = event_kind_from_string(names[i]);
      if (!kind) {
        throw FieldIssue(IssueKind::InvalidValue, json_io::index(join(path, "immediate_fail"), i),
                         "unknown event kind '" + names[i] + "'");
      }
      w.immediate_fail.push_back(*kind);
    }
  }
  try {
    w.validate();
  } catch (const std::invalid_argument &e) {
    throw FieldIssue(IssueKind::InvalidValue, path, e.what());
  }
  return w;
}

CameraSetup parse_camera(const json &j, const std::string &path) {
  json_io::check_keys(j, {"position", "rotation_vector", "view_half_angle"}, path);
  CameraSetup c;
  if (j.contains("position")) {
    c.pose.translation = json_io::vector<3>(j["position"], join(path, "position"));
  }
  if (j.contains("rotation_vector")) {
    c.pose.rotation = exp_so3<double>(json_io::vector<3>(j["rotation_vector"], join(path, "rotation_vector")));
  }
  if (j.contains("view_half_angle")) {
    c.view_half_angle = json_io::positive(j["view_half_angle"], join(path, "view_half_angle"));
  }
  return c;
}

ScenarioDefinition parse_definition(const json &doc) {
  json_io::check_keys(doc,
                      {"id", "title", "instructions", "thresholds", "weights", "camera", "objects", "actions"}, "");
  ScenarioDefinition def;
  def.id = json_io::string(json_io::require(doc, "id", ""), "id");
  def.title = json_io::string(json_io::require(doc, "title", ""), "title");
  if (doc.contains("instructions")) {
    def.instructions = json_io::strings(doc["instructions"], "instructions");
  }
  if (doc.contains("thresholds")) {
    def.thresholds = parse_thresholds(doc["thresholds"], "thresholds");
  }
  if (doc.contains("weights")) {
    def.weights = parse_weights(doc["weights"], "weights");
  }
  if (doc.contains("camera")) {
    def.camera = parse_camera(doc["camera"], "camera");
  }

  const json &objects = json_io::require(doc, "objects", "");
  json_io::expect_array(objects, "objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = json_io::index("objects", i);
    SceneObject o = parse_object(objects[i], path);
    if (def.find(o.id) >= 0) {
      throw FieldIssue(IssueKind::InvalidValue, join(path, "id"), "duplicate object id '" + o.id + "'");
    }
    def.objects.push_back(std::move(o));
  }

  const json &actions = json_io::require(doc, "actions", "");
  json_io::expect_array(actions, "actions");
  if (actions.empty()) {
    throw FieldIssue(IssueKind::InvalidValue, "actions", "must contain at least one action");
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    def.actions.push_back(parse_action(actions[i], json_io::index("actions", i), i));
  }
  return def;
}

void check_references(const ScenarioDefinition &def) {
  for (std::size_t i = 0; i < def.objects.size(); ++i) {
    const SceneObject &o = def.objects[i];
    if (!o.mounted_on) {
      continue;
    }
    const std::string path = join(json_io::index("objects", i), "mounted_on");
    const int t = def.find(*o.mounted_on);
    if (t < 0) {
      throw ScenarioError(ScenarioError::Kind::DanglingReference, path, "unknown object '" + *o.mounted_on + "'");
    }
    if (!std::holds_alternative<Tower>(def.objects[static_cast<std::size_t>(t)].shape)) {
      throw FieldIssue(IssueKind::InvalidValue, path, "'" + *o.mounted_on + "' is not a tower");
    }
    if (!o.grabbable) {
      throw FieldIssue(IssueKind::InvalidValue, path, "only grabbable objects can be mounted");
    }
  }

  for (std::size_t a = 0; a < def.actions.size(); ++a) {
    const ActionNode &action = def.actions[a];
    for (std::size_t k = 0; k < action.targets.size(); ++k) {
      const std::string path = json_io::index(join(json_io::index("actions", a), "targets"), k);
      const int idx = def.find(action.targets[k]);
      if (idx < 0) {
        throw ScenarioError(ScenarioError::Kind::DanglingReference, path,
                            "unknown object '" + action.targets[k] + "'");
      }
      const SceneObject &o = def.objects[static_cast<std::size_t>(idx)];
      const bool sphere = std::holds_alternative<Sphere>(o.shape);
      if ((action.kind == ActionKind::Touch || action.kind == ActionKind::Place) && !sphere) {
        throw FieldIssue(IssueKind::InvalidValue, path, "touch and place targets must be spheres");
      }
      if (action.kind == ActionKind::Transfer && (!o.grabbable || !o.placement_target)) {
        throw FieldIssue(IssueKind::InvalidValue, path,
                         "transfer targets must be grabbable and have a placement_target");
      }
    }
  }
}

ScenarioError::Kind to_scenario_kind(IssueKind k) {
  switch (k) {
  case IssueKind::MissingField:
    return ScenarioError::Kind::MissingField;
  case IssueKind::UnknownKey:
    return ScenarioError::Kind::UnknownKey;
  case IssueKind::InvalidValue:
    return ScenarioError::Kind::InvalidValue;
  }
  return ScenarioError::Kind::InvalidValue;
}

double angle_between(const Eigen::Vector3d &a, const Eigen::Vector3d &b) {
  const double n = a.norm() * b.norm();
  if (n == 0.0) {
    return 0.0;
  }
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

bool in_shell_wall(const Shell &s, const Eigen::Vector3d &p) {
  const Eigen::Vector3d d = (p - s.center).cwiseAbs();
  const bool in_outer = (d.array() <= s.half_extents.array()).all();
  const bool in_inner = (d.array() < (s.half_extents.array() - s.thickness)).all();
  return in_outer && !in_inner;
}

} // namespace

const char *shape_name(const Shape &s) {
  return std::visit(overloaded{[](const Sphere &) { return "sphere"; }, [](const Shell &) { return "shell"; },
                               [](const Ring &) { return "ring"; }, [](const Tower &) { return "tower"; }},
                    s);
}

Eigen::Vector3d SceneObject::anchor_point() const {
  return std::visit(overloaded{[](const Sphere &s) { return s.center; }, [](const Shell &s) { return s.center; },
                               [](const Ring &r) { return r.center; }, [](const Tower &t) { return t.base; }},
                    shape);
}

const char *to_string(ActionKind k) {
  switch (k) {
  case ActionKind::Place:
    return "place";
  case ActionKind::Touch:
    return "touch";
  case ActionKind::Transfer:
    return "transfer";
  case ActionKind::CameraAim:
    return "camera_aim";
  }
  return "unknown";
}

int ScenarioDefinition::find(std::string_view object_id) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id == object_id) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

ScenarioDefinition load_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error &e) {
    throw ScenarioError(ScenarioError::Kind::Syntax, "", std::string("malformed document: ") + e.what());
  }
  try {
    ScenarioDefinition def = parse_definition(doc);
    check_references(def);
    return def;
  } catch (const FieldIssue &issue) {
    throw ScenarioError(to_scenario_kind(issue.kind), issue.path, issue.what());
  }
}

Eigen::Vector3d view_axis(const CameraState &camera) {
  Eigen::Vector3d local = Eigen::Vector3d::UnitZ();
  if (camera.thirty_degree_mode) {
    local = axis_angle<double>(Eigen::Vector3d::UnitX(), kThirtyDegreeTilt) * local;
  }
  return camera.pose.rotation * local;
}

double force_proxy(const Posed &ee_target, const Posed &ee_actual, double stiffness) {
  return stiffness * (ee_target.translation - ee_actual.translation).norm();
}

ScenarioState start_scenario(const ScenarioDefinition &def) {
  ScenarioState s;
  const std::size_t n = def.objects.size();
  s.objects.resize(n);
  s.touchable.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    s.objects[i].position = def.objects[i].anchor_point();
    s.objects[i].mounted = def.objects[i].mounted_on.has_value();
  }
  for (const ActionNode &a : def.actions) {
    if (a.kind == ActionKind::Touch) {
      for (const auto &t : a.targets) {
        s.touchable[static_cast<std::size_t>(def.find(t))] = true;
      }
    }
  }
  for (auto &v : s.inside) {
    v.assign(n, false);
  }
  for (auto &v : s.in_wall) {
    v.assign(n, false);
  }
  return s;
}

std::vector<SessionEvent> step_session(ScenarioState &state, const ScenarioDefinition &def,
                                       std::span<const ArmContact, 2> arms, const CameraState &camera,
                                       const StepContext &ctx) {
  std::vector<SessionEvent> events;
  if (state.halted) {
    return events;
  }
  auto emit = [&](EventKind kind, std::string subject, std::optional<Side> arm) {
    events.push_back({ctx.tick, kind, std::move(subject), arm});
  };

  std::array<Eigen::Vector3d, 2> tips;
  std::array<double, 2> force{};
  for (int a = 0; a < 2; ++a) {
    tips[a] = arms[a].ee_actual.translation;
    force[a] = force_proxy(arms[a].ee_target, arms[a].ee_actual, ctx.stiffness);
    if (const auto held = state.holding[a]) {
      state.objects[*held].position = tips[a] + state.objects[*held].grasp_offset;
    }
  }

  // Objects still threaded on a tower: overload detaches the tower and fails the run.
  for (int a = 0; a < 2; ++a) {
    const auto held = state.holding[a];
    if (!held || !state.objects[*held].mounted) {
      continue;
    }
    const SceneObject &obj = def.objects[*held];
    const SceneObject &tower_obj = def.objects[static_cast<std::size_t>(def.find(*obj.mounted_on))];
    const Tower &tower = std::get<Tower>(tower_obj.shape);
    if (force[a] > tower.detach_force) {
      emit(EventKind::TowerDetach, tower_obj.id, static_cast<Side>(a));
      emit(EventKind::ScenarioFailed, def.id, std::nullopt);
      state.halted = true;
      state.failed = true;
      order_events(events);
      return events;
    }
    if (state.objects[*held].position.z() > tower.base.z() + tower.height) {
      state.objects[*held].mounted = false;
    }
  }

  // Grasp and release.
  std::vector<std::size_t> placed_now;
  for (int a = 0; a < 2; ++a) {
    const bool closed = arms[a].grip_command >= ctx.grip_close_threshold;
    const Side side = static_cast<Side>(a);
    if (const auto held = state.holding[a]) {
      if (closed) {
        continue;
      }
      ObjectState &o = state.objects[*held];
      const SceneObject &obj = def.objects[*held];
      o.held_by.reset();
      state.holding[a].reset();
      emit(EventKind::Release, obj.id, side);
      if (obj.placement_target && obj.placement_target->contains(o.position)) {
        o.placed = true;
        placed_now.push_back(*held);
      } else if (!o.mounted) {
        emit(EventKind::Drop, obj.id, side);
      }
    } else if (closed) {
      std::optional<std::size_t> best;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < def.objects.size(); ++i) {
        const SceneObject &obj = def.objects[i];
        if (!obj.grabbable || state.objects[i].held_by) {
          continue;
        }
        const double d = (tips[a] - state.objects[i].position).norm();
        if (d <= obj.grasp_radius && d < best_dist) {
          best = i;
          best_dist = d;
        }
      }
      if (best) {
        ObjectState &o = state.objects[*best];
        o.held_by = side;
        o.placed = false;
        o.grasp_offset = o.position - tips[a];
        state.holding[a] = *best;
        emit(EventKind::Grasp, def.objects[*best].id, side);
      }
    }
  }

  // Touch spheres and shell walls, with enter/exit hysteresis per tip.
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < def.objects.size(); ++i) {
    const SceneObject &obj = def.objects[i];
    for (int a = 0; a < 2; ++a) {
      if (const auto *sphere = std::get_if<Sphere>(&obj.shape)) {
        const bool now = (tips[a] - state.objects[i].position).norm() <= sphere->radius;
        if (now && !state.inside[a][i] && state.touchable[i]) {
          emit(EventKind::Touch, obj.id, static_cast<Side>(a));
          touched.push_back(i);
        }
        state.inside[a][i] = now;
      } else if (const auto *shell = std::get_if<Shell>(&obj.shape)) {
        const bool now = in_shell_wall(*shell, tips[a]);
        if (now && !state.in_wall[a][i]) {
          emit(EventKind::GlassBreak, obj.id, static_cast<Side>(a));
        }
        state.in_wall[a][i] = now;
      }
    }
  }

  // Sustained overload, one event per episode.
  const int episode_ticks = static_cast<int>(std::ceil(kForceEpisodeSeconds / ctx.dt - 1e-9));
  for (int a = 0; a < 2; ++a) {
    if (force[a] > def.thresholds.force_limit) {
      ++state.force_ticks[a];
      if (state.force_ticks[a] >= episode_ticks && !state.force_reported[a]) {
        const auto held = state.holding[a];
        emit(EventKind::ExcessiveForce, held ? def.objects[*held].id : std::string(), static_cast<Side>(a));
        state.force_reported[a] = true;
      }
    } else {
      state.force_ticks[a] = 0;
      state.force_reported[a] = false;
    }
  }

  const Eigen::Vector3d axis = view_axis(camera);
  for (int a = 0; a < 2; ++a) {
    const bool outside = angle_between(axis, tips[a] - camera.pose.translation) > def.camera.view_half_angle;
    if (outside && !state.out_of_view[a]) {
      emit(EventKind::OutOfView, to_string(static_cast<Side>(a)), static_cast<Side>(a));
    }
    state.out_of_view[a] = outside;
  }

  // Action graph progress.
  const ActionNode &action = def.actions[state.action_index];
  const auto target = static_cast<std::size_t>(def.find(action.target_for(state.repetition)));
  bool advanced = false;
  switch (action.kind) {
  case ActionKind::Touch:
    advanced = std::find(touched.begin(), touched.end(), target) != touched.end();
    break;
  case ActionKind::Transfer:
    advanced = std::find(placed_now.begin(), placed_now.end(), target) != placed_now.end();
    break;
  case ActionKind::Place:
  case ActionKind::CameraAim: {
    bool satisfied = true;
    if (action.kind == ActionKind::Place) {
      for (const auto &t : action.targets) {
        const auto i = static_cast<std::size_t>(def.find(t));
        satisfied = satisfied && (state.inside[0][i] || state.inside[1][i]);
      }
    } else {
      satisfied = angle_between(axis, state.objects[target].position - camera.pose.translation) <= action.tolerance;
    }
    advanced = satisfied && !state.goal_latched;
    state.goal_latched = satisfied;
    break;
  }
  }

  if (advanced && ++state.repetition >= action.repetitions) {
    emit(EventKind::ActionComplete, action.id, std::nullopt);
    state.repetition = 0;
    state.goal_latched = false;
    if (++state.action_index >= def.actions.size()) {
      emit(EventKind::ScenarioComplete, def.id, std::nullopt);
      state.halted = true;
      state.action_index = def.actions.size() - 1;
    }
  }

  order_events(events);
  return events;
}

} // namespace teletwin
