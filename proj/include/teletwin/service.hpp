#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "teletwin/config.hpp"
#include "teletwin/protocol.hpp"

namespace teletwin {

struct ServiceOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765; // 0 picks a free port
  EngineConfig config = EngineConfig::Default();
  std::optional<std::filesystem::path> report_dir;
  /// Defaults to resolve_scenario (bundled ids, then file paths).
  ServiceConnection::Resolver resolve;
};

/// WebSocket server: one thread and one independent session per connection.
class Service {
public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  /// Bound port (useful with port 0).
  std::uint16_t port() const;

  /// Accepts connections until stop(). Blocks.
  void run();

  /// Stops accepting, closes open connections and joins their threads.
  /// Safe to call from any thread.
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace teletwin
