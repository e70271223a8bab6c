#pragma once

#include <memory>
#include <string>
#include <thread>

#include "densify/session.hpp"

namespace httplib {
class Server;
}

namespace densify {

/// HTTP front of a Session. Routes every request through Session::handle.
class HttpService {
public:
    explicit HttpService(Session& session);
    ~HttpService();

    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    /// Binds (port 0 picks a free port) and serves on a background thread.
    /// Returns the bound port; throws IoError if binding fails.
    int start(const std::string& host, int port);
    /// Binds and serves on the calling thread until stop().
    void run(const std::string& host, int port);
    void stop();

private:
    Session& session_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

}  // namespace densify
