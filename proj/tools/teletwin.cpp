// Command-line front end: replay, serve, validate, report.
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "teletwin/config.hpp"
#include "teletwin/errors.hpp"
#include "teletwin/input_log.hpp"
#include "teletwin/replay.hpp"
#include "teletwin/service.hpp"

namespace {

using namespace teletwin;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCategory::Io, "cannot open " + path);
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw Error(ErrorCategory::Io, "cannot write " + path);
  }
}

EngineConfig config_from(const std::string &path) {
  return path.empty() ? EngineConfig::Default() : load_config(read_file(path));
}

int cmd_replay(const std::string &scenario, const std::string &log, const std::string &config, const std::string &out,
               const std::string &trace_path) {
  const EngineConfig cfg = config_from(config);
  const ScenarioDefinition def = resolve_scenario(scenario);
  std::ifstream in(log, std::ios::binary);
  if (!in) {
    throw Error(ErrorCategory::Io, "cannot open " + log);
  }
  const std::vector<InputFrame> frames = read_input_log(in);

  std::ofstream trace_out;
  TraceSink trace;
  if (!trace_path.empty()) {
    trace_out.open(trace_path, std::ios::binary);
    if (!trace_out) {
      throw Error(ErrorCategory::Io, "cannot write " + trace_path);
    }
    trace = [&trace_out](std::string_view line) { trace_out << line << '\n'; };
  }
  const ReplayResult r = run_replay(def, frames, cfg, trace);
  if (out.empty()) {
    std::cout << r.report;
  } else {
    write_file(out, r.report);
    std::cerr << def.id << ": " << to_string(r.score.status) << ", total " << r.score.total << " -> " << out << '\n';
  }
  return 0;
}

Service *g_service = nullptr;

int cmd_serve(const std::string &address, std::uint16_t port, const std::string &config, const std::string &reports) {
  ServiceOptions o;
  o.address = address;
  o.port = port;
  o.config = config_from(config);
  if (!reports.empty()) {
    o.report_dir = reports;
  }

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  Service service(std::move(o));
  g_service = &service;
  std::cerr << "listening on ws://" << address << ':' << service.port() << '\n';
  std::thread waiter([&set] {
    int sig = 0;
    sigwait(&set, &sig);
    g_service->stop();
  });
  service.run();
  service.stop();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

int cmd_validate(const std::string &scenario, const std::string &config) {
  const EngineConfig cfg = config_from(config);
  const ScenarioDefinition def = resolve_scenario(scenario);
  std::cout << "scenario " << def.id << ": " << def.title << '\n';
  std::cout << "  objects: " << def.objects.size() << '\n';
  for (const auto &a : def.actions) {
    std::cout << "  action " << a.id << ": " << to_string(a.kind) << " x" << a.repetitions << " on";
    for (const auto &t : a.targets) {
      std::cout << ' ' << t;
    }
    std::cout << '\n';
  }
  std::cout << "effective config:\n" << dump_config(cfg);
  return 0;
}

int cmd_report(const std::string &path) {
  nlohmann::json r;
  try {
    r = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCategory::Io, path + ": not a report document: " + e.what());
  }
  if (!r.is_object() || r.value("format", "") != "teletwin.report") {
    throw Error(ErrorCategory::Io, path + ": not a report document");
  }
  try {
    const auto &eff = r.at("efficiency");
    std::cout << std::fixed << std::setprecision(2);
    std::cout << "scenario   " << r.at("scenario_id").get<std::string>() << "  (session "
              << r.at("session_id").get<std::string>() << ")\n";
    std::cout << "status     " << r.at("status").get<std::string>();
    if (!r.at("failure_reason").is_null()) {
      std::cout << " (" << r.at("failure_reason").get<std::string>() << ')';
    }
    std::cout << '\n';
    const auto &tt = eff.at("total_time");
    const auto &em = eff.at("economy_of_motion");
    std::cout << "time       " << tt.at("value_s").get<double>() << " s / " << tt.at("budget_s").get<double>()
              << " s  -> " << tt.at("points").get<double>() << " pts\n";
    std::cout << "motion     " << em.at("value_m").get<double>() << " / " << em.at("budget_m").get<double>()
              << "  -> " << em.at("points").get<double>() << " pts\n";
    for (const auto &p : r.at("penalties")) {
      std::cout << "penalty    " << p.at("kind").get<std::string>() << " x" << p.at("count").get<int>() << "  -"
                << p.at("deducted").get<double>() << " pts\n";
    }
    std::cout << "total      " << r.at("total").get<double>() << '\n';
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCategory::Io, path + ": incomplete report: " + e.what());
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Surgical robot console digital twin: scenario replay, live service and reports"};
  app.require_subcommand(1);

  std::string scenario, log, config, out, trace, report_path, address = "127.0.0.1", report_dir;
  std::uint16_t port = 8765;

  auto *replay = app.add_subcommand("replay", "Replay an input log against a scenario and print the report");
  replay->add_option("scenario", scenario, "Bundled scenario id or scenario file")->required();
  replay->add_option("log", log, "Input log (JSONL)")->required();
  replay->add_option("--config", config, "Engine config file");
  replay->add_option("--out", out, "Write the report here instead of stdout");
  replay->add_option("--trace", trace, "Write the event and snapshot stream here (JSONL)");

  auto *serve = app.add_subcommand("serve", "Run the live session service (WebSocket)");
  serve->add_option("--port", port, "TCP port, 0 for any free port");
  serve->add_option("--address", address, "Listen address");
  serve->add_option("--config", config, "Engine config file");
  serve->add_option("--report-dir", report_dir, "Persist session reports here");

  auto *validate = app.add_subcommand("validate", "Check a scenario and print the effective config");
  validate->add_option("scenario", scenario, "Bundled scenario id or scenario file")->required();
  validate->add_option("--config", config, "Engine config file");

  auto *report = app.add_subcommand("report", "Pretty-print a report");
  report->add_option("report", report_path, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return static_cast<int>(ErrorCategory::Usage);
  }

  try {
    if (*replay) {
      return cmd_replay(scenario, log, config, out, trace);
    }
    if (*serve) {
      return cmd_serve(address, port, config, report_dir);
    }
    if (*validate) {
      return cmd_validate(scenario, config);
    }
    return cmd_report(report_path);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  }
}
