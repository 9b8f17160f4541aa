#include "teletwin/protocol.hpp"

#include <fstream>

#include "teletwin/errors.hpp"
#include "json_io.hpp"

namespace teletwin {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::string kNoSession;

} // namespace

std::string envelope(std::string_view type, std::string_view session_id, const std::string &payload_json) {
  std::string out = R"({"type":)";
  out += json(type).dump();
  out += R"(,"session_id":)";
  out += session_id.empty() ? "null" : json(session_id).dump();
  out += R"(,"payload":)";
  out += payload_json;
  out += '}';
  return out;
}

ServiceConnection::ServiceConnection(Options options, Send send) : options_(std::move(options)), send_(std::move(send)) {
  options_.config.validate();
}

const std::string &ServiceConnection::session_id() const { return driver_ ? driver_->session_id() : kNoSession; }

void ServiceConnection::error(std::string_view code, const std::string &message, bool fatal) {
  ordered_json p;
  p["code"] = code;
  p["message"] = message;
  p["fatal"] = fatal;
  send_(envelope("error", session_id(), p.dump()));
  if (fatal) {
    open_ = false;
  }
}

bool ServiceConnection::on_message(std::string_view text) {
  if (!open_) {
    return false;
  }
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error &) {
    error("malformed_message", "message is not valid JSON", false);
    return open_;
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    error("malformed_message", "message needs a string 'type'", false);
    return open_;
  }
  const std::string type = msg["type"].get<std::string>();
  const json payload = msg.value("payload", json::object());
  if (msg.contains("session_id") && !msg["session_id"].is_null() && driver_ &&
      msg["session_id"] != json(driver_->session_id())) {
    error("wrong_session", "message addressed to another session", false);
    return open_;
  }

  if (type == "start_session") {
    if (driver_) {
      error("session_exists", "a session is already running on this connection", false);
    } else if (!payload.is_object() || !payload.contains("scenario_id") || !payload["scenario_id"].is_string()) {
      error("malformed_message", "start_session needs payload.scenario_id", true);
    } else {
      start(payload["scenario_id"].get<std::string>());
    }
  } else if (type == "input_frame") {
    if (!driver_) {
      error("no_session", "send start_session first", false);
    } else {
      frame(payload.dump());
    }
  } else if (type == "end_session") {
    if (!driver_) {
      error("no_session", "send start_session first", false);
    } else {
      end();
    }
  } else {
    error("unknown_type", "unknown message type '" + type + "'", false);
  }
  return open_;
}

void ServiceConnection::start(const std::string &scenario_id) {
  ScenarioDefinition def;
  try {
    def = options_.resolve(scenario_id);
  } catch (const Error &e) {
    error("unknown_scenario", e.what(), true);
    return;
  }
  driver_ = std::make_unique<SessionDriver>(options_.config, std::move(def), options_.next_session_id());
  send_(envelope("snapshot", session_id(), snapshot_json(driver_->snapshot())));
}

void ServiceConnection::emit_tick(const std::vector<SessionEvent> &events, const StateSnapshot &snapshot) {
  for (const auto &e : events) {
    send_(envelope("event", session_id(), event_json(e)));
  }
  send_(envelope("snapshot", session_id(), snapshot_json(snapshot)));
}

void ServiceConnection::frame(const std::string &payload) {
  InputFrame f;
  try {
    f = parse_frame(payload);
  } catch (const std::invalid_argument &e) {
    error("malformed_frame", e.what(), false);
    return;
  }
  const auto sink = [this](const std::vector<SessionEvent> &events, const StateSnapshot &snap) {
    emit_tick(events, snap);
  };
  switch (driver_->push(f, sink)) {
  case SessionDriver::PushResult::Accepted:
    break;
  case SessionDriver::PushResult::OutOfOrder:
    error("out_of_order", "frame t_ms=" + std::to_string(f.t_ms) + " is not after the previous frame; dropped", false);
    return;
  case SessionDriver::PushResult::Halted:
    break;
  }
  if (driver_->halted()) {
    end();
  }
}

void ServiceConnection::end() {
  driver_->finish([this](const std::vector<SessionEvent> &events, const StateSnapshot &snap) { emit_tick(events, snap); });
  report_ = driver_->report();
  if (options_.report_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*options_.report_dir, ec);
    std::ofstream out(*options_.report_dir / (session_id() + ".json"), std::ios::binary);
    out << report_;
  }
  send_(envelope("report", session_id(), ordered_json::parse(report_).dump()));
  open_ = false;
}

void ServiceConnection::on_disconnect() {
  if (driver_ && open_) {
    send_ = [](const std::string &) {};
    end();
  }
  open_ = false;
}

} // namespace teletwin
