#include "dvre/api/server.hpp"

#include <algorithm>
#include <cctype>

#include <httplib.h>

#include "dvre/common/error.hpp"

namespace dvre::api {

namespace {

HttpRequest convert(const httplib::Request& in) {
    HttpRequest out;
    out.method = in.method;
    out.path = in.path;
    for (const auto& [k, v] : in.params) out.query.emplace(k, v);
    for (const auto& [k, v] : in.headers) {
        std::string key = k;
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        out.headers.emplace(std::move(key), v);
    }
    if (in.is_multipart_form_data()) {
        for (const auto& [name, part] : in.files) out.form.emplace(name, FormPart{part.filename, part.content_type, part.content});
    } else {
        out.body = in.body;
    }
    return out;
}

}  // namespace

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        HttpResponse out = service_.handle(convert(req));
        res.status = out.status;
        for (const auto& [k, v] : out.headers) res.set_header(k, v);
        res.set_content(std::move(out.body), out.content_type);
    };
    server_->Get(".*", handler);
    server_->Post(".*", handler);
    server_->Put(".*", handler);
    server_->Delete(".*", handler);
    server_->Patch(".*", handler);
    // Base64 JSON uploads are a third larger than the file itself.
    const auto cap = service_.config().upload_cap;
    server_->set_payload_max_length(static_cast<std::size_t>(cap + cap / 3 + (1u << 20)));
}

int HttpServer::start(const std::string& host, int port) {
    int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

void HttpServer::listen_blocking(const std::string& host, int port) {
    if (!server_->listen(host, port)) throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
}

void HttpServer::stop() {
    if (server_->is_running()) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace dvre::api
