#include "densify/server.hpp"

#include <httplib.h>

#include "densify/errors.hpp"

namespace densify {

namespace {

void route(Session& session, const httplib::Request& req, httplib::Response& res) {
    Request request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    request.body = req.body;
    const Response response = session.handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
}

}  // namespace

HttpService::HttpService(Session& session) : session_(session), server_(std::make_unique<httplib::Server>()) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) { route(session_, req, res); };
    server_->Get(R"(/.*)", handler);
    server_->Post(R"(/.*)", handler);
}

HttpService::~HttpService() { stop(); }

int HttpService::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = server_->bind_to_any_port(host);
    } else if (!server_->bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

void HttpService::run(const std::string& host, int port) {
    if (!server_->listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
}

void HttpService::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace densify
