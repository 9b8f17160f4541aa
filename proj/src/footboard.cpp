#include "teletwin/footboard.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

namespace teletwin {

namespace {

constexpr std::array<const char *, kPedalCount> kPedalNames = {
    "clutch", "camera", "switch", "energy1", "energy2", "energy3", "energy4", "thirty_degree"};

} // namespace

const char *to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::optional<Side> side_from_string(std::string_view name) {
  if (name == "left") {
    return Side::Left;
  }
  if (name == "right") {
    return Side::Right;
  }
  return std::nullopt;
}

const char *to_string(PedalId id) { return kPedalNames[static_cast<int>(id)]; }

std::optional<PedalId> pedal_from_string(std::string_view name) {
  for (int i = 0; i < kPedalCount; ++i) {
    if (name == kPedalNames[i]) {
      return static_cast<PedalId>(i);
    }
  }
  return std::nullopt;
}

void PedalLayout::validate() const {
  if (!(press_height > 0.0)) {
    throw std::invalid_argument("pedal layout: press_height must be positive");
  }
  if (!(board_size.x() > 0.0) || !(board_size.y() > 0.0)) {
    throw std::invalid_argument("pedal layout: board_size must be positive");
  }
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Rect &a = regions[i].area;
    if (!(a.min.x() < a.max.x()) || !(a.min.y() < a.max.y())) {
      throw std::invalid_argument(std::string("pedal layout: empty region for ") + to_string(regions[i].id));
    }
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      if (regions[i].id == regions[j].id) {
        throw std::invalid_argument(std::string("pedal layout: duplicate pedal ") + to_string(regions[i].id));
      }
      if (a.overlaps(regions[j].area)) {
        throw std::invalid_argument(std::string("pedal layout: ") + to_string(regions[i].id) + " overlaps " +
                                    to_string(regions[j].id));
      }
    }
  }
}

const PedalRegion *PedalLayout::find(PedalId id) const {
  for (const auto &r : regions) {
    if (r.id == id) {
      return &r;
    }
  }
  return nullptr;
}

PedalLayout PedalLayout::Default() {
  auto rect = [](double x0, double y0, double x1, double y1) { return Rect{{x0, y0}, {x1, y1}}; };
  PedalLayout layout;
  layout.board_size = {0.6, 0.4};
  layout.press_height = 0.02;
  // Front row
  layout.regions.push_back({PedalId::Clutch, rect(0.02, 0.04, 0.14, 0.18)});
  layout.regions.push_back({PedalId::Camera, rect(0.16, 0.04, 0.28, 0.18)});
  layout.regions.push_back({PedalId::Energy1, rect(0.32, 0.04, 0.44, 0.18)});
  layout.regions.push_back({PedalId::Energy2, rect(0.46, 0.04, 0.58, 0.18)});
  // Back row
  layout.regions.push_back({PedalId::Switch, rect(0.02, 0.22, 0.14, 0.36)});
  layout.regions.push_back({PedalId::ThirtyDegree, rect(0.16, 0.22, 0.28, 0.36)});
  layout.regions.push_back({PedalId::Energy3, rect(0.32, 0.22, 0.44, 0.36)});
  layout.regions.push_back({PedalId::Energy4, rect(0.46, 0.22, 0.58, 0.36)});
  return layout;
}

std::optional<PedalId> pedal_under(const Eigen::Vector2d &point, const PedalLayout &layout) {
  std::optional<PedalId> hit;
  for (const auto &r : layout.regions) {
    if (!r.area.contains(point)) {
      continue;
    }
    if (!hit || std::strcmp(to_string(r.id), to_string(*hit)) < 0) {
      hit = r.id;
    }
  }
  return hit;
}

PedalState detect_pedals(std::span<const FootSample> feet, const PedalLayout &layout, const PedalState &previous) {
  PedalState state;
  for (const FootSample &foot : feet) {
    const int side = static_cast<int>(foot.side);
    if (!foot.tracking_valid) {
      state.tracking_warning[side] = true;
      continue;
    }
    if (foot.height >= layout.press_height) {
      continue;
    }
    if (const auto id = pedal_under(foot.planar_position, layout)) {
      const int p = static_cast<int>(*id);
      state.pressed[p] = true;
      if (!previous.pressed[p] && !state.pressed_edge[p]) {
        state.pressed_edge[p] = true;
        state.press_edge[side] = *id;
      }
    }
  }
  return state;
}

MinimapModel minimap(std::span<const FootSample> feet, const PedalLayout &layout, const PedalState &pedals,
                     double scale_gain) {
  if (!(scale_gain > 0.0)) {
    throw std::invalid_argument("minimap: scale gain must be positive");
  }
  const Eigen::Vector2d board = layout.board_size;
  auto to_map = [&](const Eigen::Vector2d &p) -> Eigen::Vector2d { return p.cwiseQuotient(board); };

  MinimapModel model;
  model.pedals.reserve(layout.regions.size());
  for (const auto &r : layout.regions) {
    model.pedals.push_back({r.id, Rect{to_map(r.area.min), to_map(r.area.max)},
                            pedals.is_pressed(r.id) ? IconState::Black : IconState::Normal});
  }
  std::sort(model.pedals.begin(), model.pedals.end(),
            [](const MinimapPedal &a, const MinimapPedal &b) { return a.id < b.id; });

  model.feet[0].side = Side::Left;
  model.feet[1].side = Side::Right;
  for (const FootSample &foot : feet) {
    MinimapFoot &icon = model.feet[static_cast<int>(foot.side)];
    if (!foot.tracking_valid) {
      continue;
    }
    icon.position = to_map(foot.planar_position);
    icon.scale = 1.0 + scale_gain * std::max(foot.height, 0.0);
    icon.visible = true;
  }
  model.click_event = std::any_of(pedals.pressed_edge.begin(), pedals.pressed_edge.end(), [](bool e) { return e; });
  return model;
}

} // namespace teletwin
