#pragma once

#include <atomic>
#include <memory>
#include <thread>

#include "dvre/api/service.hpp"

namespace httplib {
class Server;
}

namespace dvre::api {

/// Serves a Service over HTTP on a thread pool.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    /// Binds and starts serving in a background thread; returns the bound
    /// port (useful with port 0). Throws Error(IoError) if binding fails.
    int start(const std::string& host, int port);
    /// Blocks until stop() is called from elsewhere.
    void listen_blocking(const std::string& host, int port);
    void stop();

private:
    void install_routes();

    Service& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

}  // namespace dvre::api
