#include "teletwin/replay.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "teletwin/errors.hpp"
#include "teletwin/session.hpp"

namespace teletwin {

ReplayResult run_replay(const ScenarioDefinition &def, const std::vector<InputFrame> &frames, const EngineConfig &cfg,
                        const TraceSink &trace) {
  SessionDriver driver(cfg, def, "replay");
  SessionDriver::Sink sink;
  if (trace) {
    sink = [&trace](const std::vector<SessionEvent> &events, const StateSnapshot &snap) {
      for (const auto &e : events) {
        trace(event_json(e));
      }
      trace(snapshot_json(snap));
    };
  }
  for (const InputFrame &f : frames) {
    if (driver.push(f, sink) == SessionDriver::PushResult::Halted) {
      break;
    }
  }
  driver.finish(sink);

  ReplayResult r;
  r.score = driver.score();
  r.metadata = driver.metadata();
  r.report = export_report(r.score, r.metadata);
  r.events = driver.state().events;
  return r;
}

ScenarioDefinition resolve_scenario(const std::string &id_or_path) {
  const std::string_view bundled = bundled_scenario_document(id_or_path);
  if (!bundled.empty()) {
    return load_scenario(bundled);
  }
  std::error_code ec;
  if (!std::filesystem::is_regular_file(id_or_path, ec)) {
    throw ScenarioError(ScenarioError::Kind::UnknownScenario, "", "no bundled scenario or file named '" + id_or_path + "'");
  }
  std::ifstream in(id_or_path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  if (!in && !in.eof()) {
    throw Error(ErrorCategory::Io, "cannot read " + id_or_path);
  }
  return load_scenario(text.str());
}

} // namespace teletwin
