#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "teletwin/config.hpp"
#include "teletwin/session.hpp"

namespace teletwin {

inline constexpr int kProtocolVersion = 1;

/// Envelope `{type, session_id, payload}` as one text message.
std::string envelope(std::string_view type, std::string_view session_id, const std::string &payload_json);

/// Service-side state machine of one client connection, independent of the
/// transport. Every outgoing message goes through `send`.
///
/// Client messages: start_session {scenario_id}, input_frame {frame},
/// end_session {}. Server messages: snapshot, event, report, error.
class ServiceConnection {
public:
  using Send = std::function<void(const std::string &message)>;
  using Resolver = std::function<ScenarioDefinition(const std::string &scenario_id)>;
  using IdSource = std::function<std::string()>;

  struct Options {
    EngineConfig config = EngineConfig::Default();
    Resolver resolve;
    IdSource next_session_id;
    /// Reports of finished or abandoned sessions are written here as
    /// `<session_id>.json` when set.
    std::optional<std::filesystem::path> report_dir;
  };

  ServiceConnection(Options options, Send send);

  /// Handles one client message. Returns false once the connection should close.
  bool on_message(std::string_view text);

  /// Transport closed by the peer: an active session is finalized (it
  /// cannot have completed) and its report persisted.
  void on_disconnect();

  bool open() const { return open_; }
  const std::string &session_id() const;
  const SessionDriver *session() const { return driver_.get(); }
  /// Last report produced, empty until the session ends.
  const std::string &report() const { return report_; }

private:
  void error(std::string_view code, const std::string &message, bool fatal);
  void start(const std::string &scenario_id);
  void frame(const std::string &payload);
  void end();
  void emit_tick(const std::vector<SessionEvent> &events, const StateSnapshot &snapshot);

  Options options_;
  Send send_;
  std::unique_ptr<SessionDriver> driver_;
  std::string report_;
  bool open_ = true;
};

} // namespace teletwin
