#pragma once

#include "coplattice/session.hpp"

#include <memory>
#include <string>

namespace coplattice {

// WebSocket transport for SessionManager: each text frame is one request and
// is answered by one text frame. One thread per connection.
class WebSocketServer {
public:
    explicit WebSocketServer(SessionManager& manager);
    ~WebSocketServer();

    WebSocketServer(const WebSocketServer&) = delete;
    WebSocketServer& operator=(const WebSocketServer&) = delete;

    // Binds and starts accepting in the background; port 0 picks a free port.
    // Returns the bound port.
    unsigned short start(const std::string& bind, unsigned short port);
    // Blocks until stop() is called from another thread or a signal handler.
    void wait();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace coplattice
