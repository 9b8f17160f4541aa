#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "teletwin/config.hpp"
#include "teletwin/input_log.hpp"
#include "teletwin/scenario.hpp"
#include "teletwin/scoring.hpp"

namespace teletwin {

struct ReplayResult {
  ScoreBreakdown score;
  ReportMetadata metadata;
  std::string report; // canonical report document
  std::vector<SessionEvent> events;
};

/// Receives every streamed line (event and snapshot JSON) in emission order.
using TraceSink = std::function<void(std::string_view line)>;

/// Drives the session loop over a whole log and finalizes the score. An
/// empty log produces a Failed report with zero ticks.
ReplayResult run_replay(const ScenarioDefinition &def, const std::vector<InputFrame> &frames, const EngineConfig &cfg,
                        const TraceSink &trace = {});

/// Bundled scenario ids, in training order.
const std::vector<std::string> &bundled_scenario_ids();

/// Source document of a bundled scenario, or empty when unknown.
std::string_view bundled_scenario_document(std::string_view id);

/// Loads a bundled scenario by id, or a scenario file by path. Throws
/// ScenarioError (UnknownScenario) when neither exists.
ScenarioDefinition resolve_scenario(const std::string &id_or_path);

} // namespace teletwin
