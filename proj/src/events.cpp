#include "teletwin/events.hpp"

#include <algorithm>
#include <array>

namespace teletwin {

namespace {

constexpr std::array<const char *, 13> kEventNames = {
    "tracking_lost", "ik_diverged",  "touch",      "glass_break",     "grasp",
    "release",       "drop",         "excessive_force", "out_of_view", "tower_detach",
    "action_complete", "scenario_complete", "scenario_failed"};

} // namespace

const char *to_string(EventKind k) { return kEventNames[static_cast<int>(k)]; }

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (name == kEventNames[i]) {
      return static_cast<EventKind>(i);
    }
  }
  return std::nullopt;
}

void order_events(std::vector<SessionEvent> &events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const SessionEvent &a, const SessionEvent &b) { return a.kind < b.kind; });
}

} // namespace teletwin
