#ifndef TESTS_SUPPORT_LOCALSERVER_HPP_
#define TESTS_SUPPORT_LOCALSERVER_HPP_

#include <stdexcept>
#include <string>
#include <thread>

#include "httplib.h"

namespace testutil {

/// In-process HTTP server for remote-backend tests. Register handlers on
/// server(), then start() returns the endpoint. Stops on destruction.
class LocalServer {
public:
    LocalServer() = default;
    ~LocalServer() { stop(); }
    LocalServer(const LocalServer&) = delete;
    LocalServer& operator=(const LocalServer&) = delete;

    httplib::Server& server() { return server_; }

    std::string start() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw std::runtime_error("cannot bind a local test port");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return "http://127.0.0.1:" + std::to_string(port_);
    }

    void stop() {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace testutil

#endif  // TESTS_SUPPORT_LOCALSERVER_HPP_
