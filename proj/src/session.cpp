#include "teletwin/session.hpp"

#include <algorithm>

#include "json_io.hpp"

namespace teletwin {

namespace {

using nlohmann::ordered_json;

template <typename Derived> ordered_json rounded(const Eigen::MatrixBase<Derived> &v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(canonical_number(v[i]));
  }
  return a;
}

ordered_json pose_wire(const Posed &p) {
  return {{"position", rounded(p.translation)}, {"orientation", rounded(quaternion_wxyz<double>(p.rotation))}};
}

ordered_json optional_side(const std::optional<Side> &s) {
  return s ? ordered_json(to_string(*s)) : ordered_json(nullptr);
}

} // namespace

SessionState start_session(const EngineConfig &cfg, const ScenarioDefinition &def) {
  SessionState s;
  for (int a = 0; a < 2; ++a) {
    ArmRuntime &arm = s.arms[a];
    arm.theta = cfg.chains[a].home;
    arm.frames = joint_frames(cfg.chains[a], arm.theta);
    arm.ee_actual = arm.frames.back();
    arm.teleop = initial_arm_state(Posed::Identity(), arm.ee_actual);
  }
  s.camera.pose = def.camera.pose;
  s.camera.anchor = anchor(Posed::Identity(), def.camera.pose);
  s.feet = InputFrame{}.feet;
  s.scenario = start_scenario(def);
  return s;
}

ScoreBreakdown live_score(const SessionState &state, const ScenarioDefinition &def) {
  ScoreBreakdown b = finalize(state.efficiency, state.events, def.thresholds, def.weights);
  if (!state.halted && b.failure_reason == "incomplete") {
    double deductions = 0.0;
    for (const auto &p : b.penalties) {
      deductions += p.deducted;
    }
    b.failure_reason = "in_progress";
    b.total = std::max(0.0, b.total_time + b.economy_of_motion - deductions);
  }
  return b;
}

TickOutput tick(SessionState s, const InputFrame &frame, const EngineConfig &cfg, const ScenarioDefinition &def) {
  if (s.halted) {
    StateSnapshot snap = make_snapshot(s, cfg, def);
    return {std::move(s), {}, std::move(snap)};
  }
  const std::int64_t n = s.tick + 1;
  std::vector<SessionEvent> events;

  const PedalState pedals = detect_pedals(frame.feet, cfg.pedals, s.pedals);
  for (int a = 0; a < 2; ++a) {
    if (pedals.tracking_warning[a] && !s.pedals.tracking_warning[a]) {
      events.push_back({n, EventKind::TrackingLost, std::string("foot_") + to_string(static_cast<Side>(a)),
                        static_cast<Side>(a)});
    }
  }
  s.pedals = pedals;
  s.feet = frame.feet;

  for (int a = 0; a < 2; ++a) {
    if (frame.masters[a].valid) {
      s.arms[a].master = frame.masters[a].pose();
      s.arms[a].grip_input = frame.masters[a].grip;
    }
  }
  if (!s.anchored) {
    for (auto &arm : s.arms) {
      arm.teleop = initial_arm_state(arm.master, arm.ee_actual);
    }
    s.anchored = true;
  }

  s.camera = toggle_thirty_degree(s.camera, pedals.edge(PedalId::ThirtyDegree));
  for (int a = 0; a < 2; ++a) {
    ArmRuntime &arm = s.arms[a];
    TeleopStep step = step_teleop(arm.teleop, s.camera, arm.master, arm.grip_input, pedals, cfg.teleop,
                                  static_cast<Side>(a) == Side::Right);
    arm.teleop = step.arm;
    s.camera = step.camera;
  }

  std::array<ArmContact, 2> contacts;
  std::vector<Posed> tracked;
  tracked.reserve(2 * (kChainJoints + 1));
  for (int a = 0; a < 2; ++a) {
    ArmRuntime &arm = s.arms[a];
    const KinematicChaind &chain = cfg.chains[a];
    const IkResultd ik = solve_ik(chain, arm.teleop.ee_target, arm.theta, cfg.ik);
    arm.ik_status = ik.status;
    arm.ik_iterations = ik.iterations;
    JointVectord desired = ik.theta;
    if (ik.status == IkStatus::Diverged) {
      desired = arm.theta;
      events.push_back({n, EventKind::IkDiverged, to_string(static_cast<Side>(a)), static_cast<Side>(a)});
    }
    arm.theta = smooth_joint_step(arm.theta, desired, cfg.tick, cfg.joint_rate_limit);
    arm.frames = joint_frames(chain, arm.theta);
    arm.ee_actual = arm.frames.back();
    arm.force = force_proxy(arm.teleop.ee_target, arm.ee_actual, cfg.force_stiffness);
    contacts[a] = {arm.ee_actual, arm.teleop.ee_target, arm.teleop.grip_command};
    tracked.insert(tracked.end(), arm.frames.begin(), arm.frames.end());
  }

  StepContext ctx{n, cfg.tick, cfg.teleop.grip_close_threshold, cfg.force_stiffness};
  std::vector<SessionEvent> scenario_events = step_session(s.scenario, def, contacts, s.camera, ctx);
  events.insert(events.end(), scenario_events.begin(), scenario_events.end());
  order_events(events);

  s.efficiency = accumulate(std::move(s.efficiency), tracked, cfg.tick, cfg.motion_beta);
  s.tick = n;
  s.halted = s.scenario.halted;
  s.events.insert(s.events.end(), events.begin(), events.end());

  StateSnapshot snap = make_snapshot(s, cfg, def);
  return {std::move(s), std::move(events), std::move(snap)};
}

StateSnapshot make_snapshot(const SessionState &s, const EngineConfig &cfg, const ScenarioDefinition &def) {
  StateSnapshot snap;
  snap.tick = s.tick;
  snap.t_ms = static_cast<double>(s.tick) * cfg.tick * 1000.0;
  for (int a = 0; a < 2; ++a) {
    const ArmRuntime &arm = s.arms[a];
    ArmSnapshot &out = snap.arms[a];
    out.side = static_cast<Side>(a);
    out.mode = arm.teleop.mode;
    out.theta = arm.theta;
    out.ee_actual = arm.ee_actual;
    out.ee_target = arm.teleop.ee_target;
    out.grip = arm.teleop.grip_command;
    out.ik_status = arm.ik_status;
    out.ik_iterations = arm.ik_iterations;
    out.force = arm.force;
    out.skeleton[0] = cfg.chains[a].joints[0].offset.translation;
    for (int i = 0; i <= kChainJoints; ++i) {
      out.skeleton[static_cast<std::size_t>(i) + 1] = arm.frames[static_cast<std::size_t>(i)].translation;
    }
  }
  snap.camera_pose = s.camera.pose;
  snap.camera_thirty_degree = s.camera.thirty_degree_mode;
  snap.camera_view_axis = view_axis(s.camera);
  snap.pedals = s.pedals.pressed;
  snap.minimap = minimap(s.feet, cfg.pedals, s.pedals, cfg.minimap_scale_gain);

  for (std::size_t i = 0; i < def.objects.size(); ++i) {
    const ObjectState &o = s.scenario.objects[i];
    snap.objects.push_back({def.objects[i].id, shape_name(def.objects[i].shape), o.position, o.held_by, o.mounted,
                            o.placed});
  }

  const ActionNode &action = def.actions[s.scenario.action_index];
  ProgressSnapshot &p = snap.progress;
  p.action_id = action.id;
  p.action_kind = to_string(action.kind);
  p.action_index = static_cast<int>(s.scenario.action_index);
  p.action_count = static_cast<int>(def.actions.size());
  p.repetition = s.scenario.repetition;
  p.repetitions = action.repetitions;
  p.target = action.target_for(s.scenario.repetition);
  if (!action.parameters.empty()) {
    p.parameter = action.parameters[static_cast<std::size_t>(s.scenario.repetition)];
  }
  p.completed = s.scenario.halted && !s.scenario.failed;
  p.failed = s.scenario.failed;

  snap.score = live_score(s, def);
  return snap;
}

std::string snapshot_json(const StateSnapshot &snap) {
  ordered_json j;
  j["tick"] = snap.tick;
  j["t_ms"] = canonical_number(snap.t_ms);

  ordered_json arms = ordered_json::array();
  for (const ArmSnapshot &a : snap.arms) {
    ordered_json skeleton = ordered_json::array();
    for (const auto &p : a.skeleton) {
      skeleton.push_back(rounded(p));
    }
    arms.push_back({{"side", to_string(a.side)},
                    {"mode", to_string(a.mode)},
                    {"theta", rounded(a.theta)},
                    {"ee_actual", pose_wire(a.ee_actual)},
                    {"ee_target", pose_wire(a.ee_target)},
                    {"grip", canonical_number(a.grip)},
                    {"ik", {{"status", to_string(a.ik_status)}, {"iterations", a.ik_iterations}}},
                    {"force", canonical_number(a.force)},
                    {"skeleton", skeleton}});
  }
  j["arms"] = arms;

  ordered_json camera = pose_wire(snap.camera_pose);
  camera["thirty_degree"] = snap.camera_thirty_degree;
  camera["view_axis"] = rounded(snap.camera_view_axis);
  j["camera"] = camera;

  ordered_json pedals = ordered_json::object();
  for (int i = 0; i < kPedalCount; ++i) {
    pedals[to_string(static_cast<PedalId>(i))] = snap.pedals[static_cast<std::size_t>(i)];
  }
  j["pedals"] = pedals;

  ordered_json icons = ordered_json::array();
  for (const MinimapPedal &p : snap.minimap.pedals) {
    icons.push_back({{"id", to_string(p.id)},
                     {"min", rounded(p.icon.min)},
                     {"max", rounded(p.icon.max)},
                     {"state", p.state == IconState::Black ? "black" : "normal"}});
  }
  ordered_json feet = ordered_json::array();
  for (const MinimapFoot &f : snap.minimap.feet) {
    feet.push_back({{"side", to_string(f.side)},
                    {"position", rounded(f.position)},
                    {"scale", canonical_number(f.scale)},
                    {"visible", f.visible}});
  }
  j["minimap"] = {{"pedals", icons}, {"feet", feet}, {"click_event", snap.minimap.click_event}};

  ordered_json objects = ordered_json::array();
  for (const ObjectSnapshot &o : snap.objects) {
    objects.push_back({{"id", o.id},
                       {"shape", o.shape},
                       {"position", rounded(o.position)},
                       {"held_by", optional_side(o.held_by)},
                       {"mounted", o.mounted},
                       {"placed", o.placed}});
  }
  j["objects"] = objects;

  const ProgressSnapshot &p = snap.progress;
  j["progress"] = {{"action_id", p.action_id},
                   {"action_kind", p.action_kind},
                   {"action_index", p.action_index},
                   {"action_count", p.action_count},
                   {"repetition", p.repetition},
                   {"repetitions", p.repetitions},
                   {"target", p.target},
                   {"parameter", p.parameter ? ordered_json(canonical_number(*p.parameter)) : ordered_json(nullptr)},
                   {"completed", p.completed},
                   {"failed", p.failed}};

  double deductions = 0.0;
  for (const auto &line : snap.score.penalties) {
    deductions += line.deducted;
  }
  j["score"] = {{"elapsed_s", canonical_number(snap.score.elapsed)},
                {"motion_m", canonical_number(snap.score.motion)},
                {"total_time", canonical_number(snap.score.total_time)},
                {"economy_of_motion", canonical_number(snap.score.economy_of_motion)},
                {"deductions", canonical_number(deductions)},
                {"total", canonical_number(snap.score.total)}};
  return j.dump();
}

std::string event_json(const SessionEvent &e) {
  ordered_json j;
  j["tick"] = e.tick;
  j["kind"] = to_string(e.kind);
  j["subject"] = e.subject;
  j["arm"] = optional_side(e.arm);
  return j.dump();
}

SessionDriver::SessionDriver(EngineConfig cfg, ScenarioDefinition def, std::string session_id)
    : cfg_(std::move(cfg)), def_(std::move(def)), session_id_(std::move(session_id)),
      state_(start_session(cfg_, def_)) {
  cfg_.validate();
}

SessionDriver::PushResult SessionDriver::push(const InputFrame &frame, const Sink &sink) {
  if (state_.halted) {
    return PushResult::Halted;
  }
  const std::int64_t t_us = frame.t_ms * 1000;
  if (!held_) {
    start_us_ = t_us;
    held_ = frame;
    return PushResult::Accepted;
  }
  if (frame.t_ms <= held_->t_ms) {
    return PushResult::OutOfOrder;
  }
  run_until(t_us, false, sink);
  held_ = frame;
  return PushResult::Accepted;
}

void SessionDriver::finish(const Sink &sink) {
  if (held_) {
    run_until(held_->t_ms * 1000, true, sink);
  }
}

void SessionDriver::run_until(std::int64_t limit_us, bool inclusive, const Sink &sink) {
  const std::int64_t step = cfg_.tick_us();
  while (!state_.halted) {
    const std::int64_t t = start_us_ + state_.tick * step;
    if (inclusive ? t > limit_us : t >= limit_us) {
      break;
    }
    TickOutput out = tick(std::move(state_), *held_, cfg_, def_);
    state_ = std::move(out.state);
    if (sink) {
      sink(out.events, out.snapshot);
    }
  }
}

ScoreBreakdown SessionDriver::score() const {
  return finalize(state_.efficiency, state_.events, def_.thresholds, def_.weights);
}

ReportMetadata SessionDriver::metadata() const {
  ReportMetadata m;
  m.scenario_id = def_.id;
  m.session_id = session_id_;
  m.start_ms = held_ ? start_us_ / 1000 : 0;
  m.end_ms = (start_us_ + state_.tick * cfg_.tick_us()) / 1000;
  m.ticks = state_.tick;
  return m;
}

} // namespace teletwin
