#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "script.hpp"
#include "teletwin/replay.hpp"

using namespace teletwin;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(TELETWIN_SOURCE_DIR) / "fixtures";

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in, "cannot open " << p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<InputFrame> load_log(const std::string &name) {
  std::ifstream in(kFixtures / (name + ".jsonl"), std::ios::binary);
  REQUIRE(in);
  return read_input_log(in);
}

ReplayResult replay_fixture(const std::string &name) {
  const auto &f = script::fixture(name);
  return run_replay(resolve_scenario(f.scenario_id), load_log(name), EngineConfig::Default());
}

} // namespace

TEST_SUITE("replay") {

TEST_CASE("every fixture reproduces its golden report byte for byte") {
  REQUIRE(script::fixtures().size() == 8);
  for (const auto &f : script::fixtures()) {
    CAPTURE(f.name);
    CHECK(replay_fixture(f.name).report == slurp(kFixtures / "golden" / (f.name + ".json")));
  }
}

TEST_CASE("the scripts regenerate the frozen logs") {
  const auto cfg = EngineConfig::Default();
  for (const auto &f : script::fixtures()) {
    CAPTURE(f.name);
    std::ostringstream out;
    write_input_log(out, f.build(cfg, resolve_scenario(f.scenario_id)));
    CHECK(out.str() == slurp(kFixtures / (f.name + ".jsonl")));
  }
}

TEST_CASE("clean runs of every bundled scenario score one hundred") {
  for (const char *name : {"wrist_articulation_1", "clutch", "camera_0", "sea_spikes_1", "ring_tower_transfer_1"}) {
    CAPTURE(name);
    const auto r = replay_fixture(name);
    CHECK(r.score.status == ScoreStatus::Completed);
    CHECK(r.score.total == 100.0);
  }
}

TEST_CASE("pulling the ring off the tower fails the run") {
  const auto r = replay_fixture("ring_tower_transfer_1_detach");
  CHECK(r.score.status == ScoreStatus::Failed);
  CHECK(r.score.failure_reason == "tower_detach");
  CHECK(r.score.total == 0.0);
  REQUIRE_FALSE(r.events.empty());
  CHECK(r.events.back().kind == EventKind::ScenarioFailed);
}

TEST_CASE("wrist training scores rise with skill") {
  const auto novice = replay_fixture("wrist_articulation_1_novice");
  const auto intermediate = replay_fixture("wrist_articulation_1_intermediate");
  const auto expert = replay_fixture("wrist_articulation_1");
  CHECK(novice.score.status == ScoreStatus::Completed);
  CHECK(novice.score.total < intermediate.score.total);
  CHECK(intermediate.score.total < expert.score.total);
  CHECK(novice.score.elapsed > 120.0);
  CHECK_FALSE(novice.score.penalties.empty());
}

TEST_CASE("an empty log is a failed zero-tick report") {
  const auto r = run_replay(resolve_scenario("clutch"), {}, EngineConfig::Default());
  CHECK(r.score.status == ScoreStatus::Failed);
  CHECK(r.score.total == 0.0);
  CHECK(r.metadata.ticks == 0);
  const auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["status"] == "failed");
  CHECK(doc["timestamps"]["ticks"] == 0);
}

TEST_CASE("trace carries every event and one snapshot per tick") {
  std::size_t snapshots = 0, events = 0;
  const auto r = run_replay(resolve_scenario("clutch"), load_log("clutch"), EngineConfig::Default(),
                            [&](std::string_view line) {
                              const auto j = nlohmann::json::parse(line);
                              (j.contains("kind") ? events : snapshots) += 1;
                            });
  CHECK(snapshots == static_cast<std::size_t>(r.metadata.ticks));
  CHECK(events == r.events.size());
}

TEST_CASE("replays are deterministic") {
  const auto a = replay_fixture("sea_spikes_1");
  const auto b = replay_fixture("sea_spikes_1");
  CHECK(a.report == b.report);
  CHECK(a.events == b.events);
}

}
