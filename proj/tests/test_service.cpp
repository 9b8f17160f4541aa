#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "json.hpp"
#include "teletwin/errors.hpp"
#include "teletwin/service.hpp"

using namespace teletwin;
using nlohmann::json;
namespace fs = std::filesystem;
namespace asio = boost::asio;
namespace beast = boost::beast;
using tcp = asio::ip::tcp;

namespace {

class WsClient {
public:
  explicit WsClient(std::uint16_t port) : ws_(ioc_) {
    tcp::resolver resolver(ioc_);
    asio::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", "/");
    ws_.text(true);
  }

  void send(const json &msg) { ws_.write(asio::buffer(msg.dump())); }

  json receive() {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return json::parse(beast::buffers_to_string(buffer.data()));
  }

  /// Reads until a message of `type` arrives.
  json until(const std::string &type) {
    for (;;) {
      json m = receive();
      if (m["type"] == type) {
        return m;
      }
    }
  }

  void drop() {
    beast::error_code ec;
    ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
    ws_.next_layer().close(ec);
  }

private:
  asio::io_context ioc_;
  beast::websocket::stream<tcp::socket> ws_;
};

json frame(std::int64_t t) {
  return {{"t_ms", t},
          {"left", {{"position", {0.0, 0.2, 1.0}}, {"orientation", {1.0, 0.0, 0.0, 0.0}}}},
          {"right", {{"position", {0.0, -0.2, 1.0}}, {"orientation", {1.0, 0.0, 0.0, 0.0}}}},
          {"feet",
           {{{"side", "left"}, {"position", {0.3, 0.3}}, {"height", 0.1}},
            {{"side", "right"}, {"position", {0.5, 0.3}}, {"height", 0.1}}}}};
}

struct Running {
  Service service;
  std::thread thread;

  explicit Running(ServiceOptions o) : service(std::move(o)), thread([this] { service.run(); }) {}
  ~Running() {
    service.stop();
    thread.join();
  }
};

ServiceOptions options(const fs::path &dir) {
  ServiceOptions o;
  o.port = 0;
  o.report_dir = dir;
  return o;
}

bool wait_for(const fs::path &p) {
  for (int i = 0; i < 500 && !fs::exists(p); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return fs::exists(p);
}

} // namespace

TEST_SUITE("service") {

TEST_CASE("a client runs a session over the websocket") {
  const fs::path dir = fs::temp_directory_path() / "teletwin_service_single";
  fs::remove_all(dir);
  Running srv(options(dir));
  CHECK(srv.service.port() != 0);

  WsClient c(srv.service.port());
  c.send({{"type", "start_session"}, {"session_id", nullptr}, {"payload", {{"scenario_id", "clutch"}}}});
  const json first = c.receive();
  CHECK(first["type"] == "snapshot");
  const std::string id = first["session_id"];
  for (int t = 0; t <= 100; t += 20) {
    c.send({{"type", "input_frame"}, {"session_id", id}, {"payload", frame(t)}});
  }
  c.send({{"type", "end_session"}, {"session_id", id}});
  const json report = c.until("report");
  CHECK(report["payload"]["session_id"] == id);
  CHECK(report["payload"]["timestamps"]["ticks"] == 11);
  CHECK(wait_for(dir / (id + ".json")));
  fs::remove_all(dir);
}

TEST_CASE("concurrent clients get independent sessions") {
  const fs::path dir = fs::temp_directory_path() / "teletwin_service_pair";
  fs::remove_all(dir);
  Running srv(options(dir));
  WsClient a(srv.service.port());
  WsClient b(srv.service.port());
  a.send({{"type", "start_session"}, {"payload", {{"scenario_id", "clutch"}}}});
  b.send({{"type", "start_session"}, {"payload", {{"scenario_id", "camera_0"}}}});
  const json sa = a.receive();
  const json sb = b.receive();
  CHECK(sa["session_id"] != sb["session_id"]);
  CHECK(sa["payload"]["progress"]["action_kind"] == "touch");
  CHECK(sb["payload"]["progress"]["action_kind"] == "camera_aim");

  for (int t = 0; t <= 200; t += 10) {
    a.send({{"type", "input_frame"}, {"payload", frame(t)}});
    if (t <= 100) {
      b.send({{"type", "input_frame"}, {"payload", frame(t)}});
    }
  }
  a.send({{"type", "end_session"}});
  b.send({{"type", "end_session"}});
  const json ra = a.until("report");
  const json rb = b.until("report");
  CHECK(ra["payload"]["scenario_id"] == "clutch");
  CHECK(rb["payload"]["scenario_id"] == "camera_0");
  CHECK(ra["payload"]["timestamps"]["ticks"] == 21);
  CHECK(rb["payload"]["timestamps"]["ticks"] == 11);
  fs::remove_all(dir);
}

TEST_CASE("a dropped connection still leaves a report") {
  const fs::path dir = fs::temp_directory_path() / "teletwin_service_drop";
  fs::remove_all(dir);
  Running srv(options(dir));
  std::string id;
  {
    WsClient c(srv.service.port());
    c.send({{"type", "start_session"}, {"payload", {{"scenario_id", "sea_spikes_1"}}}});
    id = c.receive()["session_id"];
    c.send({{"type", "input_frame"}, {"payload", frame(0)}});
    c.send({{"type", "input_frame"}, {"payload", frame(300)}});
    for (int i = 0; i < 30; ++i) {
      c.until("snapshot");
    }
    c.drop();
  }
  REQUIRE(wait_for(dir / (id + ".json")));
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  std::ifstream in(dir / (id + ".json"));
  const json report = json::parse(in);
  CHECK(report["status"] == "failed");
  CHECK(report["failure_reason"] == "incomplete");
  fs::remove_all(dir);
}

TEST_CASE("unknown scenarios close the connection with an error") {
  Running srv(options(fs::temp_directory_path() / "teletwin_service_unknown"));
  WsClient c(srv.service.port());
  c.send({{"type", "start_session"}, {"payload", {{"scenario_id", "nowhere"}}}});
  const json e = c.receive();
  CHECK(e["type"] == "error");
  CHECK(e["payload"]["code"] == "unknown_scenario");
  CHECK_THROWS_AS(c.receive(), beast::system_error);
}

TEST_CASE("binding a taken port is a service error") {
  Running srv(options(fs::temp_directory_path() / "teletwin_service_taken"));
  ServiceOptions o;
  o.port = srv.service.port();
  try {
    Service clash(o);
    FAIL("second service bound the same port");
  } catch (const Error &e) {
    CHECK(e.category() == ErrorCategory::Service);
  }
}

TEST_CASE("stop returns promptly with a client still connected") {
  auto srv = std::make_unique<Running>(options(fs::temp_directory_path() / "teletwin_service_stop"));
  WsClient c(srv->service.port());
  c.send({{"type", "start_session"}, {"payload", {{"scenario_id", "clutch"}}}});
  c.receive();
  const auto t0 = std::chrono::steady_clock::now();
  srv.reset();
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(2));
}

}
