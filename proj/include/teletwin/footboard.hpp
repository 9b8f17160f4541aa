#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace teletwin {

enum class Side { Left = 0, Right = 1 };

const char *to_string(Side s);
std::optional<Side> side_from_string(std::string_view name);

enum class PedalId { Clutch = 0, Camera, Switch, Energy1, Energy2, Energy3, Energy4, ThirtyDegree };
inline constexpr int kPedalCount = 8;

const char *to_string(PedalId id);
std::optional<PedalId> pedal_from_string(std::string_view name);

struct FootSample {
  Side side = Side::Left;
  Eigen::Vector2d planar_position = Eigen::Vector2d::Zero(); // m, board plane
  double height = 0.0;                                       // m above board
  bool tracking_valid = true;
};

/// Closed axis-aligned rectangle in the board plane.
struct Rect {
  Eigen::Vector2d min = Eigen::Vector2d::Zero();
  Eigen::Vector2d max = Eigen::Vector2d::Zero();

  bool contains(const Eigen::Vector2d &p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  /// True when the interiors intersect; shared edges do not count.
  bool overlaps(const Rect &o) const {
    return min.x() < o.max.x() && o.min.x() < max.x() && min.y() < o.max.y() && o.min.y() < max.y();
  }
  Eigen::Vector2d center() const { return (min + max) / 2.0; }
};

struct PedalRegion {
  PedalId id = PedalId::Clutch;
  Rect area;
};

struct PedalLayout {
  Eigen::Vector2d board_size{0.6, 0.4};
  std::vector<PedalRegion> regions;
  double press_height = 0.02;

  /// Throws std::invalid_argument on overlapping or duplicate regions.
  void validate() const;
  const PedalRegion *find(PedalId id) const;

  /// Eight pedals in two rows on a 0.6 x 0.4 m board.
  static PedalLayout Default();
};

struct PedalState {
  std::array<bool, kPedalCount> pressed{};
  /// Pedals that went from released to pressed this tick.
  std::array<bool, kPedalCount> pressed_edge{};
  /// Per side, the pedal this foot newly pressed this tick.
  std::array<std::optional<PedalId>, 2> press_edge{};
  /// Per side, set when the foot's sample had no valid position.
  std::array<bool, 2> tracking_warning{};

  bool is_pressed(PedalId id) const { return pressed[static_cast<int>(id)]; }
  bool edge(PedalId id) const { return pressed_edge[static_cast<int>(id)]; }
};

/// The pedal under a foot point, or none. Boundary ties go to the
/// lexicographically smallest pedal name.
std::optional<PedalId> pedal_under(const Eigen::Vector2d &point, const PedalLayout &layout);

/// Level-triggered press detection: a pedal is pressed while a validly tracked
/// foot is inside its region below press_height. Edges are taken against
/// `previous`.
PedalState detect_pedals(std::span<const FootSample> feet, const PedalLayout &layout, const PedalState &previous);

enum class IconState { Normal, Black };

struct MinimapPedal {
  PedalId id = PedalId::Clutch;
  Rect icon; // normalized board coordinates in [0, 1]
  IconState state = IconState::Normal;
};

struct MinimapFoot {
  Side side = Side::Left;
  Eigen::Vector2d position = Eigen::Vector2d::Zero(); // normalized board coordinates
  double scale = 1.0;
  bool visible = false;
};

struct MinimapModel {
  std::vector<MinimapPedal> pedals;
  std::array<MinimapFoot, 2> feet{};
  bool click_event = false;
};

/// Foot icon scale is 1 + scale_gain·height; pressed pedals render black;
/// the click fires on press edges only.
MinimapModel minimap(std::span<const FootSample> feet, const PedalLayout &layout, const PedalState &pedals,
                     double scale_gain);

} // namespace teletwin
