#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teletwin/footboard.hpp"

namespace teletwin {

/// Declaration order is the fixed within-tick ordering of emitted events.
enum class EventKind {
  TrackingLost,
  IkDiverged,
  Touch,
  GlassBreak,
  Grasp,
  Release,
  Drop,
  ExcessiveForce,
  OutOfView,
  TowerDetach,
  ActionComplete,
  ScenarioComplete,
  ScenarioFailed,
};

const char *to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view name);

struct SessionEvent {
  std::int64_t tick = 0;
  EventKind kind = EventKind::Touch;
  std::string subject;
  std::optional<Side> arm;

  friend bool operator==(const SessionEvent &, const SessionEvent &) = default;
};

/// Stable sort by kind; used to order the events of a single tick.
void order_events(std::vector<SessionEvent> &events);

} // namespace teletwin
