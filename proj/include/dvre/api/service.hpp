#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dvre/api/config.hpp"
#include "dvre/contracts/platform.hpp"
#include "dvre/keynet/client.hpp"

namespace dvre::api {

struct FormPart {
    std::string filename;
    std::string content_type;
    std::string content;
};

/// Transport-neutral request. Header names are lower case.
struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::map<std::string, std::string> headers;
    std::string body;
    /// multipart/form-data parts by field name, already parsed.
    std::map<std::string, FormPart> form;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::map<std::string, std::string> headers;
};

struct Session {
    std::string token;
    Address address;
    std::int64_t expires_at = 0;
    /// The login signature; presented to key nodes on the user's behalf.
    wallet::AuthSig login;
};

int http_status(ErrorCode code);

/// The HTTP/JSON surface of one node: ledger, store and key network, with
/// session auth over wallet signatures. Thread-safe; handle() may be called
/// concurrently.
class Service {
public:
    using WallClock = std::function<std::int64_t()>;

    /// `wall_clock` drives session and challenge expiry (and the ledger when
    /// demo_clock is off); defaults to the system clock.
    explicit Service(NodeConfig config, WallClock wall_clock = {});
    ~Service();

    HttpResponse handle(const HttpRequest& request);

    const NodeConfig& config() const { return config_; }
    contracts::Platform& platform() { return *platform_; }
    store::BlockStore& store() { return *store_; }
    keynet::KeyNetwork& keynet() { return *keynet_; }

private:
    struct Challenge {
        std::int64_t expires_at = 0;
        bool used = false;
    };

    HttpResponse route(const HttpRequest& req);
    Session require_session(const HttpRequest& req);
    bool is_live_login(const wallet::AuthSig& sig);

    HttpResponse post_challenge(const HttpRequest& req);
    HttpResponse post_login(const HttpRequest& req);
    HttpResponse post_user(const HttpRequest& req);
    HttpResponse get_user(const std::string& address);
    HttpResponse post_group(const HttpRequest& req);
    HttpResponse get_groups(const HttpRequest& req);
    HttpResponse get_group(const HttpRequest& req, const std::string& id);
    HttpResponse post_members(const HttpRequest& req, const std::string& id);
    HttpResponse get_members(const HttpRequest& req, const std::string& id);
    HttpResponse post_files(const HttpRequest& req, const std::string& id);
    HttpResponse get_files(const HttpRequest& req, const std::string& id);
    HttpResponse post_asset(const HttpRequest& req);
    HttpResponse get_asset(const HttpRequest& req, const std::string& cid);
    HttpResponse get_gas_report(const HttpRequest& req);
    HttpResponse post_ledger_time(const HttpRequest& req);
    HttpResponse get_health();

    NodeConfig config_;
    WallClock wall_clock_;
    std::unique_ptr<contracts::Platform> platform_;
    std::unique_ptr<store::BlockStore> store_;
    std::unique_ptr<keynet::KeyNetwork> keynet_;
    std::unique_ptr<std::ofstream> log_out_;

    std::mutex auth_mu_;
    std::map<std::string, Challenge> challenges_;
    std::map<std::string, Session> sessions_;
};

}  // namespace dvre::api
