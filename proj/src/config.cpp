#include "teletwin/config.hpp"

#include <cmath>

#include "json_io.hpp"
#include "teletwin/errors.hpp"

namespace teletwin {

namespace {

using json_io::FieldIssue;
using json_io::IssueKind;
using json_io::join;
using nlohmann::json;
using nlohmann::ordered_json;

void read_number(const json &j, const char *key, const std::string &path, double &out) {
  if (j.contains(key)) {
    out = json_io::number(j[key], join(path, key));
  }
}

void read_chain(const json &j, const std::string &path, KinematicChaind &chain) {
  json_io::check_keys(j, {"joints", "tool", "lower", "upper", "home"}, path);
  if (j.contains("joints")) {
    const json &joints = j["joints"];
    const std::string jp = join(path, "joints");
    json_io::expect_array(joints, jp);
    if (joints.size() != kChainJoints) {
      throw FieldIssue(IssueKind::InvalidValue, jp, "exactly 6 revolute joints are required");
    }
    for (std::size_t i = 0; i < joints.size(); ++i) {
      const std::string p = json_io::index(jp, i);
      json_io::check_keys(joints[i], {"axis", "offset"}, p);
      chain.joints[i].axis = json_io::vector<3>(json_io::require(joints[i], "axis", p), join(p, "axis"));
      chain.joints[i].offset = joints[i].contains("offset") ? json_io::pose(joints[i]["offset"], join(p, "offset"))
                                                            : Posed::Identity();
    }
  }
  if (j.contains("tool")) {
    chain.tool = json_io::pose(j["tool"], join(path, "tool"));
  }
  if (j.contains("lower")) {
    chain.lower = json_io::vector<6>(j["lower"], join(path, "lower"));
  }
  if (j.contains("upper")) {
    chain.upper = json_io::vector<6>(j["upper"], join(path, "upper"));
  }
  if (j.contains("home")) {
    chain.home = json_io::vector<6>(j["home"], join(path, "home"));
  }
}

void read_footboard(const json &j, const std::string &path, EngineConfig &cfg) {
  json_io::check_keys(j, {"board_size", "press_height", "scale_gain", "pedals"}, path);
  if (j.contains("board_size")) {
    cfg.pedals.board_size = json_io::vector<2>(j["board_size"], join(path, "board_size"));
  }
  read_number(j, "press_height", path, cfg.pedals.press_height);
  read_number(j, "scale_gain", path, cfg.minimap_scale_gain);
  if (j.contains("pedals")) {
    const std::string pp = join(path, "pedals");
    json_io::expect_array(j["pedals"], pp);
    cfg.pedals.regions.clear();
    for (std::size_t i = 0; i < j["pedals"].size(); ++i) {
      const json &r = j["pedals"][i];
      const std::string p = json_io::index(pp, i);
      json_io::check_keys(r, {"id", "min", "max"}, p);
      const std::string name = json_io::string(json_io::require(r, "id", p), join(p, "id"));
      const auto id = pedal_from_string(name);
      if (!id) {
        throw FieldIssue(IssueKind::InvalidValue, join(p, "id"), "unknown pedal '" + name + "'");
      }
      cfg.pedals.regions.push_back({*id, Rect{json_io::vector<2>(json_io::require(r, "min", p), join(p, "min")),
                                              json_io::vector<2>(json_io::require(r, "max", p), join(p, "max"))}});
    }
  }
}

EngineConfig parse_config(const json &doc) {
  EngineConfig cfg = EngineConfig::Default();
  json_io::check_keys(doc, {"version", "tick", "chains", "teleop", "ik", "joint_rate_limit", "footboard", "scoring"},
                      "");
  if (doc.contains("version") && json_io::integer(doc["version"], "version") != kConfigVersion) {
    throw FieldIssue(IssueKind::InvalidValue, "version", "unsupported config version");
  }
  read_number(doc, "tick", "", cfg.tick);
  read_number(doc, "joint_rate_limit", "", cfg.joint_rate_limit);

  if (doc.contains("chains")) {
    const json &chains = doc["chains"];
    json_io::check_keys(chains, {"left", "right"}, "chains");
    if (chains.contains("left")) {
      read_chain(chains["left"], "chains.left", cfg.chains[0]);
    }
    if (chains.contains("right")) {
      read_chain(chains["right"], "chains.right", cfg.chains[1]);
    }
  }
  if (doc.contains("teleop")) {
    const json &t = doc["teleop"];
    json_io::check_keys(t, {"motion_scale", "camera_rotation_scale", "grip_close_threshold"}, "teleop");
    read_number(t, "motion_scale", "teleop", cfg.teleop.motion_scale);
    read_number(t, "camera_rotation_scale", "teleop", cfg.teleop.camera_rotation_scale);
    read_number(t, "grip_close_threshold", "teleop", cfg.teleop.grip_close_threshold);
  }
  if (doc.contains("ik")) {
    const json &k = doc["ik"];
    json_io::check_keys(k,
                        {"max_iterations", "position_tolerance", "orientation_tolerance", "damping_lambda",
                         "condition_threshold", "step_clamp"},
                        "ik");
    if (k.contains("max_iterations")) {
      cfg.ik.max_iterations = static_cast<int>(json_io::integer(k["max_iterations"], "ik.max_iterations"));
    }
    read_number(k, "position_tolerance", "ik", cfg.ik.position_tolerance);
    read_number(k, "orientation_tolerance", "ik", cfg.ik.orientation_tolerance);
    read_number(k, "damping_lambda", "ik", cfg.ik.damping_lambda);
    read_number(k, "condition_threshold", "ik", cfg.ik.condition_threshold);
    read_number(k, "step_clamp", "ik", cfg.ik.step_clamp);
  }
  if (doc.contains("footboard")) {
    read_footboard(doc["footboard"], "footboard", cfg);
  }
  if (doc.contains("scoring")) {
    const json &s = doc["scoring"];
    json_io::check_keys(s, {"motion_beta", "force_stiffness"}, "scoring");
    read_number(s, "motion_beta", "scoring", cfg.motion_beta);
    read_number(s, "force_stiffness", "scoring", cfg.force_stiffness);
  }
  return cfg;
}

ordered_json chain_json(const KinematicChaind &chain) {
  ordered_json joints = ordered_json::array();
  for (const auto &j : chain.joints) {
    joints.push_back({{"axis", json_io::array(j.axis)}, {"offset", json_io::pose_json(j.offset)}});
  }
  return {{"joints", joints},
          {"tool", json_io::pose_json(chain.tool)},
          {"lower", json_io::array(chain.lower)},
          {"upper", json_io::array(chain.upper)},
          {"home", json_io::array(chain.home)}};
}

} // namespace

Posed default_arm_base(Side side) {
  return Posed::Translation({0.0, side == Side::Left ? 0.15 : -0.15, 0.5});
}

EngineConfig EngineConfig::Default() {
  EngineConfig cfg;
  cfg.chains[0] = default_chain<double>(default_arm_base(Side::Left));
  cfg.chains[1] = default_chain<double>(default_arm_base(Side::Right));
  return cfg;
}

std::int64_t EngineConfig::tick_us() const { return std::llround(tick * 1e6); }

void EngineConfig::validate() const {
  auto guard = [](const std::string &field, auto &&fn) {
    try {
      fn();
    } catch (const std::invalid_argument &e) {
      throw ConfigError(field, e.what());
    }
  };
  if (!(tick > 0.0) || tick_us() <= 0) {
    throw ConfigError("tick", "must be positive (microsecond resolution)");
  }
  if (!(joint_rate_limit > 0.0)) {
    throw ConfigError("joint_rate_limit", "must be positive");
  }
  if (!(minimap_scale_gain > 0.0)) {
    throw ConfigError("footboard.scale_gain", "must be positive");
  }
  if (!(motion_beta >= 0.0)) {
    throw ConfigError("scoring.motion_beta", "must be non-negative");
  }
  if (!(force_stiffness > 0.0)) {
    throw ConfigError("scoring.force_stiffness", "must be positive");
  }
  guard("chains.left", [&] { validate_chain(chains[0]); });
  guard("chains.right", [&] { validate_chain(chains[1]); });
  guard("teleop", [&] { teleop.validate(); });
  guard("ik", [&] { ik.validate(); });
  guard("footboard", [&] { pedals.validate(); });
}

EngineConfig load_config(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error &e) {
    throw ConfigError("", std::string("malformed document: ") + e.what());
  }
  EngineConfig cfg;
  try {
    cfg = parse_config(doc);
  } catch (const FieldIssue &issue) {
    throw ConfigError(issue.path, issue.what());
  }
  cfg.validate();
  return cfg;
}

std::string dump_config(const EngineConfig &cfg) {
  ordered_json doc;
  doc["version"] = kConfigVersion;
  doc["tick"] = cfg.tick;
  doc["chains"] = {{"left", chain_json(cfg.chains[0])}, {"right", chain_json(cfg.chains[1])}};
  doc["teleop"] = {{"motion_scale", cfg.teleop.motion_scale},
                   {"camera_rotation_scale", cfg.teleop.camera_rotation_scale},
                   {"grip_close_threshold", cfg.teleop.grip_close_threshold}};
  doc["ik"] = {{"max_iterations", cfg.ik.max_iterations},
               {"position_tolerance", cfg.ik.position_tolerance},
               {"orientation_tolerance", cfg.ik.orientation_tolerance},
               {"damping_lambda", cfg.ik.damping_lambda},
               {"condition_threshold", cfg.ik.condition_threshold},
               {"step_clamp", cfg.ik.step_clamp}};
  doc["joint_rate_limit"] = cfg.joint_rate_limit;
  ordered_json pedals = ordered_json::array();
  for (const auto &r : cfg.pedals.regions) {
    pedals.push_back({{"id", to_string(r.id)}, {"min", json_io::array(r.area.min)}, {"max", json_io::array(r.area.max)}});
  }
  doc["footboard"] = {{"board_size", json_io::array(cfg.pedals.board_size)},
                      {"press_height", cfg.pedals.press_height},
                      {"scale_gain", cfg.minimap_scale_gain},
                      {"pedals", pedals}};
  doc["scoring"] = {{"motion_beta", cfg.motion_beta}, {"force_stiffness", cfg.force_stiffness}};
  return doc.dump(2) + "\n";
}

} // namespace teletwin
