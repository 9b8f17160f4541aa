#include "teletwin/service.hpp"

#include <iostream>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "teletwin/errors.hpp"
#include "teletwin/replay.hpp"

namespace teletwin {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct Service::Impl {
  struct Connection {
    tcp::socket socket;
    std::thread thread;
    std::atomic<bool> done{false};
    explicit Connection(tcp::socket s) : socket(std::move(s)) {}
  };

  ServiceOptions options;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::mutex mutex;
  std::list<std::unique_ptr<Connection>> connections;
  std::atomic<bool> stopping{false};
  std::atomic<std::uint64_t> session_counter{0};

  void serve(Connection &conn);
  void reap();
};

void Service::Impl::serve(Connection &conn) {
  ServiceConnection::Options o;
  o.config = options.config;
  o.resolve = options.resolve ? options.resolve : [](const std::string &id) { return resolve_scenario(id); };
  o.next_session_id = [this] { return "s" + std::to_string(++session_counter); };
  o.report_dir = options.report_dir;

  websocket::stream<tcp::socket &> ws(conn.socket);
  try {
    ws.accept();
    ws.text(true);
    ServiceConnection session(std::move(o), [&ws](const std::string &m) { ws.write(asio::buffer(m)); });
    beast::flat_buffer buffer;
    try {
      while (session.open()) {
        buffer.clear();
        ws.read(buffer);
        session.on_message(beast::buffers_to_string(buffer.data()));
      }
    } catch (const beast::system_error &) {
      session.on_disconnect();
      conn.done = true;
      return;
    }
    beast::error_code ec;
    ws.close(websocket::close_code::normal, ec);
  } catch (const beast::system_error &) {
    // handshake failed or peer vanished while we were writing
  }
  conn.done = true;
}

void Service::Impl::reap() {
  std::lock_guard lock(mutex);
  for (auto it = connections.begin(); it != connections.end();) {
    if ((*it)->done) {
      (*it)->thread.join();
      it = connections.erase(it);
    } else {
      ++it;
    }
  }
}

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  impl_->options.config.validate();
  const tcp::endpoint ep(asio::ip::make_address(impl_->options.address), impl_->options.port);
  try {
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
  } catch (const beast::system_error &e) {
    throw Error(ErrorCategory::Service, "cannot listen on " + impl_->options.address + ":" +
                                            std::to_string(impl_->options.port) + ": " + e.code().message());
  }
}

Service::~Service() {
  stop();
  beast::error_code ec;
  impl_->acceptor.close(ec);
}

std::uint16_t Service::port() const { return impl_->acceptor.local_endpoint().port(); }

void Service::run() {
  while (!impl_->stopping) {
    tcp::socket socket(impl_->ioc);
    beast::error_code ec;
    impl_->acceptor.accept(socket, ec);
    if (impl_->stopping) {
      break;
    }
    if (ec) {
      continue;
    }
    impl_->reap();
    std::lock_guard lock(impl_->mutex);
    if (impl_->stopping) {
      break;
    }
    auto conn = std::make_unique<Impl::Connection>(std::move(socket));
    Impl::Connection &ref = *conn;
    impl_->connections.push_back(std::move(conn));
    ref.thread = std::thread([this, &ref] { impl_->serve(ref); });
  }
}

void Service::stop() {
  if (impl_->stopping.exchange(true)) {
    return;
  }
  beast::error_code ec;
  {
    // Wake a blocking accept() in run().
    asio::io_context wake_ioc;
    tcp::socket wake(wake_ioc);
    auto address = impl_->acceptor.local_endpoint(ec).address();
    if (!ec) {
      if (address.is_unspecified()) {
        address = address.is_v6() ? asio::ip::address(asio::ip::address_v6::loopback())
                                  : asio::ip::address(asio::ip::address_v4::loopback());
      }
      wake.connect({address, port()}, ec);
    }
  }
  std::list<std::unique_ptr<Impl::Connection>> connections;
  {
    std::lock_guard lock(impl_->mutex);
    for (auto &c : impl_->connections) {
      c->socket.shutdown(tcp::socket::shutdown_both, ec);
    }
    connections.swap(impl_->connections);
  }
  for (auto &c : connections) {
    if (c->thread.joinable()) {
      c->thread.join();
    }
  }
}

} // namespace teletwin
