#pragma once

#include <array>
#include <string>
#include <string_view>

#include "teletwin/chain.hpp"
#include "teletwin/footboard.hpp"
#include "teletwin/ik.hpp"
#include "teletwin/teleop.hpp"

namespace teletwin {

inline constexpr int kConfigVersion = 1;

/// Everything the engine loop needs besides the scenario. Every field has an
/// embedded default; a config file overrides any subset.
struct EngineConfig {
  double tick = 0.01; // s
  std::array<KinematicChaind, 2> chains;
  TeleopConfig teleop;
  IkConfigd ik;
  double joint_rate_limit = 4.0; // rad/s
  PedalLayout pedals = PedalLayout::Default();
  double minimap_scale_gain = 2.0; // 1/m
  double motion_beta = 0.05;       // m per rad in economy of motion
  double force_stiffness = 500.0;  // force units per m of tracking error

  static EngineConfig Default();

  /// Throws ConfigError.
  void validate() const;

  std::int64_t tick_us() const;
};

/// Default arm bases: two arms side by side, 0.3 m apart, 0.5 m above the table.
Posed default_arm_base(Side side);

/// Overlays a JSON config document onto the defaults. Throws ConfigError.
EngineConfig load_config(std::string_view document);

/// Canonical JSON of a complete config (round-trips through load_config).
std::string dump_config(const EngineConfig &cfg);

} // namespace teletwin
