#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "teletwin/footboard.hpp"
#include "teletwin/pose.hpp"

namespace teletwin {

inline constexpr std::string_view kInputLogFormat = "teletwin.input_log";
inline constexpr int kInputLogVersion = 1;

struct MasterSample {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();                 // m
  Eigen::Vector4d orientation{1.0, 0.0, 0.0, 0.0};                     // unit quaternion, w first
  double grip = 0.0;                                                   // [0, 1]
  bool valid = true;

  Posed pose() const;
};

/// One sample of every operator input; t_ms counts from session start.
struct InputFrame {
  std::int64_t t_ms = 0;
  std::array<MasterSample, 2> masters{};
  std::array<FootSample, 2> feet{FootSample{Side::Left, {0.3, 0.3}, 0.1, true},
                                 FootSample{Side::Right, {0.5, 0.3}, 0.1, true}};
};

/// Parses one frame object; throws std::invalid_argument describing the field.
InputFrame parse_frame(std::string_view text);

/// Canonical single-line JSON for a frame.
std::string serialize_frame(const InputFrame &frame);

std::string input_log_header();

/// Reads a JSONL log: version header line, then one frame per line with
/// strictly increasing t_ms. Blank lines are skipped. Throws LogError with
/// the 1-based line number.
std::vector<InputFrame> read_input_log(std::istream &in);

void write_input_log(std::ostream &out, const std::vector<InputFrame> &frames);

} // namespace teletwin
