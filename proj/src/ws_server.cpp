#include "coplattice/ws_server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <condition_variable>
#include <iostream>
#include <thread>

namespace coplattice {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct WebSocketServer::Impl {
    SessionManager& manager;
    asio::io_context io;
    tcp::acceptor acceptor{io};
    asio::signal_set signals{io, SIGINT, SIGTERM};
    std::thread accept_thread;
    std::mutex mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;
    std::atomic<int> live{0};

    explicit Impl(SessionManager& m) : manager(m) {}

    void mark_stopped() {
        {
            std::lock_guard lock(mutex);
            stopped = true;
        }
        stopped_cv.notify_all();
    }

    void accept() {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            ++live;
            std::thread([this, s = std::move(socket)]() mutable {
                serve(std::move(s));
                --live;
            }).detach();
            accept();
        });
    }

    void serve(tcp::socket socket) {
        try {
            websocket::stream<tcp::socket> ws(std::move(socket));
            ws.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
            ws.accept();
            for (;;) {
                beast::flat_buffer buffer;
                ws.read(buffer);
                const auto reply = manager.handle_line(beast::buffers_to_string(buffer.data()));
                ws.text(true);
                ws.write(asio::buffer(reply));
            }
        } catch (const beast::system_error& e) {
            if (e.code() != websocket::error::closed && e.code() != asio::error::eof)
                std::cerr << "connection: " << e.code().message() << '\n';
        } catch (const std::exception& e) {
            std::cerr << "connection: " << e.what() << '\n';
        }
    }
};

WebSocketServer::WebSocketServer(SessionManager& manager) : impl_(std::make_unique<Impl>(manager)) {}

WebSocketServer::~WebSocketServer() { stop(); }

unsigned short WebSocketServer::start(const std::string& bind, unsigned short port) {
    tcp::endpoint ep{asio::ip::make_address(bind), port};
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
    impl_->accept();
    impl_->signals.async_wait([this](beast::error_code ec, int) {
        if (!ec) impl_->mark_stopped();
    });
    impl_->accept_thread = std::thread([this] { impl_->io.run(); });
    return impl_->acceptor.local_endpoint().port();
}

void WebSocketServer::wait() {
    std::unique_lock lock(impl_->mutex);
    impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

void WebSocketServer::stop() {
    impl_->mark_stopped();
    impl_->io.stop();
    if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
    beast::error_code ec;
    impl_->acceptor.close(ec);
    // Give open connections a moment to notice their peers hanging up.
    for (int i = 0; i < 200 && impl_->live > 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
}

}  // namespace coplattice
