#include "teletwin/input_log.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "json_io.hpp"
#include "teletwin/errors.hpp"

namespace teletwin {

namespace {

using json_io::FieldIssue;
using json_io::join;
using nlohmann::json;
using nlohmann::ordered_json;

MasterSample parse_master(const json &j, const std::string &path) {
  json_io::check_keys(j, {"position", "orientation", "grip", "valid"}, path);
  MasterSample m;
  m.position = json_io::vector<3>(json_io::require(j, "position", path), join(path, "position"));
  m.orientation = json_io::vector<4>(json_io::require(j, "orientation", path), join(path, "orientation"));
  if (std::abs(m.orientation.norm() - 1.0) > 1e-6) {
    throw FieldIssue(json_io::IssueKind::InvalidValue, join(path, "orientation"), "quaternion must have unit norm");
  }
  if (j.contains("grip")) {
    m.grip = json_io::number(j["grip"], join(path, "grip"));
    if (m.grip < 0.0 || m.grip > 1.0) {
      throw FieldIssue(json_io::IssueKind::InvalidValue, join(path, "grip"), "must be in [0, 1]");
    }
  }
  if (j.contains("valid")) {
    m.valid = json_io::boolean(j["valid"], join(path, "valid"));
  }
  return m;
}

FootSample parse_foot(const json &j, const std::string &path, Side expected) {
  json_io::check_keys(j, {"side", "position", "height", "valid"}, path);
  FootSample f;
  const std::string side = json_io::string(json_io::require(j, "side", path), join(path, "side"));
  const auto parsed = side_from_string(side);
  if (!parsed || *parsed != expected) {
    throw FieldIssue(json_io::IssueKind::InvalidValue, join(path, "side"),
                     std::string("expected '") + to_string(expected) + "'");
  }
  f.side = *parsed;
  f.planar_position = json_io::vector<2>(json_io::require(j, "position", path), join(path, "position"));
  f.height = json_io::number(json_io::require(j, "height", path), join(path, "height"));
  if (j.contains("valid")) {
    f.tracking_valid = json_io::boolean(j["valid"], join(path, "valid"));
  }
  if (f.tracking_valid && f.height < 0.0) {
    throw FieldIssue(json_io::IssueKind::InvalidValue, join(path, "height"), "must be non-negative");
  }
  return f;
}

InputFrame frame_from_json(const json &j) {
  json_io::check_keys(j, {"t_ms", "left", "right", "feet"}, "");
  InputFrame f;
  f.t_ms = json_io::integer(json_io::require(j, "t_ms", ""), "t_ms");
  f.masters[0] = parse_master(json_io::require(j, "left", ""), "left");
  f.masters[1] = parse_master(json_io::require(j, "right", ""), "right");
  const json &feet = json_io::require(j, "feet", "");
  json_io::expect_array(feet, "feet");
  if (feet.size() != 2) {
    throw FieldIssue(json_io::IssueKind::InvalidValue, "feet", "expected left and right foot samples");
  }
  f.feet[0] = parse_foot(feet[0], "feet[0]", Side::Left);
  f.feet[1] = parse_foot(feet[1], "feet[1]", Side::Right);
  return f;
}

ordered_json master_json(const MasterSample &m) {
  return {{"position", json_io::array(m.position)},
          {"orientation", json_io::array(m.orientation)},
          {"grip", m.grip},
          {"valid", m.valid}};
}

ordered_json foot_json(const FootSample &f) {
  return {{"side", to_string(f.side)},
          {"position", json_io::array(f.planar_position)},
          {"height", f.height},
          {"valid", f.tracking_valid}};
}

} // namespace

Posed MasterSample::pose() const {
  return {rotation_from_quaternion(orientation[0], orientation[1], orientation[2], orientation[3]), position};
}

InputFrame parse_frame(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  try {
    return frame_from_json(j);
  } catch (const FieldIssue &issue) {
    throw std::invalid_argument(issue.path + ": " + issue.what());
  }
}

std::string serialize_frame(const InputFrame &frame) {
  ordered_json j;
  j["t_ms"] = frame.t_ms;
  j["left"] = master_json(frame.masters[0]);
  j["right"] = master_json(frame.masters[1]);
  j["feet"] = {foot_json(frame.feet[0]), foot_json(frame.feet[1])};
  return j.dump();
}

std::string input_log_header() {
  ordered_json j;
  j["format"] = kInputLogFormat;
  j["version"] = kInputLogVersion;
  return j.dump();
}

std::vector<InputFrame> read_input_log(std::istream &in) {
  std::vector<InputFrame> frames;
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    if (!header_seen) {
      json h;
      try {
        h = json::parse(line);
      } catch (const json::parse_error &) {
        throw LogError(number, "malformed header");
      }
      if (!h.is_object() || h.value("format", "") != kInputLogFormat) {
        throw LogError(number, "missing input log header");
      }
      if (h.value("version", 0) != kInputLogVersion) {
        throw LogError(number, "unsupported input log version");
      }
      header_seen = true;
      continue;
    }
    InputFrame f;
    try {
      f = parse_frame(line);
    } catch (const std::invalid_argument &e) {
      throw LogError(number, e.what());
    }
    if (!frames.empty() && f.t_ms <= frames.back().t_ms) {
      throw LogError(number, "timestamps must be strictly increasing");
    }
    frames.push_back(f);
  }
  return frames;
}

void write_input_log(std::ostream &out, const std::vector<InputFrame> &frames) {
  out << input_log_header() << '\n';
  for (const auto &f : frames) {
    out << serialize_frame(f) << '\n';
  }
}

} // namespace teletwin
