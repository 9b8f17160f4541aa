// Regenerates the scripted input logs and their golden reports.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "script.hpp"
#include "teletwin/replay.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Write fixture logs (fixtures/<name>.jsonl) and golden reports (fixtures/golden/<name>.json)"};
  std::string dir = "fixtures";
  bool summary = false;
  app.add_option("--dir", dir, "Output directory");
  app.add_flag("--summary", summary, "Print status and total per fixture");
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "golden");
  const teletwin::EngineConfig cfg = teletwin::EngineConfig::Default();
  for (const auto &f : teletwin::script::fixtures()) {
    const auto def = teletwin::resolve_scenario(f.scenario_id);
    const auto frames = f.build(cfg, def);
    {
      std::ofstream out(fs::path(dir) / (f.name + ".jsonl"), std::ios::binary);
      teletwin::write_input_log(out, frames);
    }
    const auto r = teletwin::run_replay(def, frames, cfg);
    std::ofstream(fs::path(dir) / "golden" / (f.name + ".json"), std::ios::binary) << r.report;
    if (summary) {
      std::cout << f.name << ": " << teletwin::to_string(r.score.status) << " total " << r.score.total << " time "
                << r.score.elapsed << " motion " << r.score.motion;
      for (const auto &p : r.score.penalties) {
        std::cout << ' ' << teletwin::to_string(p.kind) << 'x' << p.count;
      }
      if (!r.score.failure_reason.empty()) {
        std::cout << " (" << r.score.failure_reason << ')';
      }
      std::cout << '\n';
    }
  }
  return 0;
}
