#include <httplib.h>
#include <json.hpp>

#include <gtest/gtest.h>

#include "dvre/api/config.hpp"
#include "dvre/api/json_codec.hpp"
#include "dvre/api/server.hpp"
#include "dvre/api/service.hpp"
#include "dvre/common/base64.hpp"
#include "support.hpp"

namespace dvre::api {
namespace {

using json = nlohmann::json;
using test::kMar27;
using test::kMar28;
using test::kMar30;
using test::key_wallet;

class ApiTest : public ::testing::Test {
protected:
    explicit ApiTest(std::function<void(NodeConfig&)> tweak = {}) {
        config_.store_root = dir_ / "store";
        config_.demo_clock = true;
        config_.genesis_time = kMar27;
        if (tweak) tweak(config_);
        service_ = std::make_unique<Service>(config_, [this] { return wall_; });
    }

    HttpResponse call(const std::string& method, const std::string& path, const json& body = nullptr,
                      const std::string& token = "", std::map<std::string, std::string> query = {}) {
        HttpRequest req;
        req.method = method;
        req.path = path;
        req.query = std::move(query);
        if (!body.is_null()) req.body = body.dump();
        if (!token.empty()) req.headers["authorization"] = "Bearer " + token;
        return service_->handle(req);
    }

    static json body(const HttpResponse& r) { return json::parse(r.body); }

    std::string login(const wallet::Wallet& w) {
        auto c = body(call("POST", "/auth/challenge"));
        auto sig = wallet::sign_auth(w, c["challenge"].get<std::string>());
        auto r = call("POST", "/auth/login", to_json(sig));
        EXPECT_EQ(r.status, 200) << r.body;
        return body(r)["token"];
    }

    std::string register_and_login(const wallet::Wallet& w, const std::string& name) {
        std::string token = login(w);
        auto r = call("POST", "/users", {{"username", name}, {"organization", "UvA"}, {"country", "Netherlands"}}, token);
        EXPECT_EQ(r.status, 201) << r.body;
        return token;
    }

    std::string create_group(const std::string& token) {
        auto r = call("POST", "/groups",
                      {{"group_name", "DataSharing"}, {"permissions", "Full Access"}, {"organizations", "UvA,UiS"},
                       {"countries", json::array({"Netherlands", "Norway"})}},
                      token);
        EXPECT_EQ(r.status, 201) << r.body;
        return body(r)["group"];
    }

    void set_time(std::int64_t t) { ASSERT_EQ(call("POST", "/ledger/time", {{"time", t}}).status, 200); }

    test::TempDir dir_;
    NodeConfig config_;
    std::int64_t wall_ = 1'800'000'000;
    std::unique_ptr<Service> service_;
    wallet::Wallet alice_ = key_wallet(1);
    wallet::Wallet bob_ = key_wallet(2);
    wallet::Wallet carol_ = key_wallet(3);
};

TEST_F(ApiTest, LoginFlow) {
    auto c = body(call("POST", "/auth/challenge"));
    std::string challenge = c["challenge"];
    EXPECT_TRUE(challenge.starts_with("dvre-login:"));
    EXPECT_EQ(c["expires_at"], wall_ + 300);

    auto forged = wallet::sign_auth(bob_, challenge);
    forged.address = alice_.address;
    EXPECT_EQ(call("POST", "/auth/login", to_json(forged)).status, 401);

    auto sig = wallet::sign_auth(alice_, challenge);
    auto r = call("POST", "/auth/login", to_json(sig));
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(body(r)["address"], alice_.address.to_checksum_hex());
    EXPECT_EQ(call("POST", "/auth/login", to_json(sig)).status, 409);

    auto unknown = wallet::sign_auth(alice_, wallet::make_login_challenge());
    EXPECT_EQ(call("POST", "/auth/login", to_json(unknown)).status, 401);

    auto late = body(call("POST", "/auth/challenge"))["challenge"].get<std::string>();
    wall_ += 301;
    EXPECT_EQ(call("POST", "/auth/login", to_json(wallet::sign_auth(alice_, late))).status, 401);
}

TEST_F(ApiTest, SessionsExpireAndGateEndpoints) {
    EXPECT_EQ(call("GET", "/groups").status, 401);
    EXPECT_EQ(call("GET", "/groups", nullptr, "not-a-token").status, 401);
    std::string token = login(alice_);
    EXPECT_EQ(call("GET", "/groups", nullptr, token).status, 200);
    wall_ += 3600;
    EXPECT_EQ(call("GET", "/groups", nullptr, token).status, 401);
}

TEST_F(ApiTest, UsersAndGroups) {
    std::string a = login(alice_);
    auto r = call("POST", "/users", {{"username", "alice"}, {"organization", "UvA"}, {"country", "Netherlands"}}, a);
    ASSERT_EQ(r.status, 201);
    EXPECT_EQ(body(r)["receipt"]["gas_used"], 1535460);
    EXPECT_EQ(call("POST", "/users", {{"username", "again"}}, a).status, 409);
    EXPECT_EQ(call("POST", "/users", {{"organization", "x"}}, login(bob_)).status, 422);

    auto u = call("GET", "/users/" + alice_.address.to_checksum_hex());
    ASSERT_EQ(u.status, 200);
    EXPECT_EQ(body(u)["username"], "alice");
    EXPECT_EQ(call("GET", "/users/" + carol_.address.to_checksum_hex()).status, 404);

    auto g = call("POST", "/groups", {{"group_name", "DataSharing"}}, a);
    ASSERT_EQ(g.status, 201);
    EXPECT_EQ(body(g)["receipt"]["gas_used"], 1832050);
    std::string group = body(g)["group"];
    EXPECT_EQ(body(call("GET", "/groups/" + group, nullptr, a))["group_owner_address"],
              alice_.address.to_checksum_hex());
    EXPECT_EQ(call("GET", "/groups/0x0000000000000000000000000000000000000001", nullptr, a).status, 404);
    EXPECT_EQ(call("GET", "/groups/nonsense", nullptr, a).status, 422);
    EXPECT_EQ(call("POST", "/groups", {{"group_name", "X"}}, login(carol_)).status, 403);
}

TEST_F(ApiTest, OnlyOwnerAddsMembers) {
    std::string a = register_and_login(alice_, "alice");
    std::string b = register_and_login(bob_, "bob");
    std::string group = create_group(a);
    json member = {{"eoa_address", bob_.address.to_checksum_hex()}, {"access_from", "2024-03-27"},
                   {"access_to", "2024-03-29"}};
    auto denied = call("POST", "/groups/" + group + "/members", member, b);
    ASSERT_EQ(denied.status, 403);
    EXPECT_EQ(body(denied)["error"], "Reverted");
    EXPECT_EQ(body(denied)["receipt"]["revert_reason"], "Only group owner can call this function");

    auto ok = call("POST", "/groups/" + group + "/members", {{"members", json::array({member})}}, a);
    ASSERT_EQ(ok.status, 200) << ok.body;
    EXPECT_EQ(body(ok)["receipt"]["events"].size(), 1u);
    auto members = body(call("GET", "/groups/" + group + "/members", nullptr, b))["members"];
    ASSERT_EQ(members.size(), 1u);
    EXPECT_EQ(members[0]["access_to"], test::kMar29 + 86399);

    json bad = member;
    bad["access_from"] = "2024-03-30";
    auto inverted = call("POST", "/groups/" + group + "/members", bad, a);
    EXPECT_EQ(inverted.status, 422);
    EXPECT_EQ(body(inverted)["error"], "InvalidWindow");
    bad["access_from"] = "someday";
    EXPECT_EQ(call("POST", "/groups/" + group + "/members", bad, a).status, 422);
}

TEST_F(ApiTest, AssetLifecycle) {
    std::string a = register_and_login(alice_, "alice");
    std::string b = register_and_login(bob_, "bob");
    std::string c = register_and_login(carol_, "carol");
    std::string group = create_group(a);
    call("POST", "/groups/" + group + "/members",
         {{"eoa_address", bob_.address.to_checksum_hex()}, {"access_from", "2024-03-27"}, {"access_to", "2024-03-29"}},
         a);

    const std::string content = "pixel data \x01\x02\x03";
    auto up = call("POST", "/assets",
                   {{"file_name", "#binary#mask.png"}, {"group", group}, {"content_base64", base64_encode(to_bytes(content))}},
                   a);
    ASSERT_EQ(up.status, 201) << up.body;
    std::string cid = body(up)["cid"];
    EXPECT_TRUE(cid.starts_with("dvre1-"));

    auto files = body(call("GET", "/groups/" + group + "/files", nullptr, a))["files"];
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(files[0]["ipfs_hash"], cid);

    set_time(kMar28);
    auto got = call("GET", "/assets/" + cid, nullptr, b);
    ASSERT_EQ(got.status, 200) << got.body;
    EXPECT_EQ(got.body, content);
    EXPECT_EQ(got.headers["X-File-Name"], "%23binary%23mask.png");
    EXPECT_EQ(call("GET", "/assets/" + cid, nullptr, c).status, 403);

    set_time(kMar30);
    auto late = call("GET", "/assets/" + cid, nullptr, b);
    EXPECT_EQ(late.status, 403);
    EXPECT_NE(late.body.find("acc_failed"), std::string::npos);
    EXPECT_EQ(call("GET", "/groups/" + group + "/files", nullptr, b).status, 403);
    EXPECT_EQ(call("GET", "/assets/" + cid, nullptr, a).status, 200);
    EXPECT_EQ(call("POST", "/ledger/time", {{"time", kMar28}}).status, 409);
}

TEST_F(ApiTest, MultipartUpload) {
    std::string a = register_and_login(alice_, "alice");
    std::string group = create_group(a);
    HttpRequest req;
    req.method = "POST";
    req.path = "/assets";
    req.headers["authorization"] = "Bearer " + a;
    req.form["file"] = FormPart{"notes.txt", "text/plain", "hello"};
    req.form["group"] = FormPart{"", "", group};
    req.form["acc"] = FormPart{"", "", R"({"type":"is_owner","group":")" + group + R"("})"};
    auto r = service_->handle(req);
    ASSERT_EQ(r.status, 201) << r.body;
    EXPECT_EQ(body(r)["file_name"], "notes.txt");
    EXPECT_EQ(call("GET", "/assets/" + body(r)["cid"].get<std::string>(), nullptr, a).body, "hello");
}

TEST_F(ApiTest, UploadRollsBackWhenLedgerRefuses) {
    std::string a = register_and_login(alice_, "alice");
    std::string c = register_and_login(carol_, "carol");
    std::string group = create_group(a);
    auto r = call("POST", "/assets", {{"file_name", "x"}, {"group", group}, {"content_base64", "aGk="}}, c);
    EXPECT_EQ(r.status, 403);
    EXPECT_EQ(body(r)["error"], "NotMember");
    EXPECT_EQ(service_->store().usage().pinned_files, 0u);
    for (std::uint32_t i = 1; i <= 5; ++i) {
        for (const auto& e : service_->keynet().node(i).audit_log()) EXPECT_FALSE(service_->keynet().node(i).holds(e.key_id));
    }
}

TEST_F(ApiTest, GasReport) {
    auto r = call("GET", "/gas/report");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(body(r)["deployments"]["PolicyManager"], 2738927);
    EXPECT_EQ(body(r)["policy_manager_minus_factory"], 489248);
    auto f = call("GET", "/gas/report", nullptr, "", {{"preset", "formula"}});
    EXPECT_EQ(body(f)["mode"], "formula");
    EXPECT_TRUE(body(f)["deployment_ordering"].get<bool>());
    EXPECT_EQ(call("GET", "/gas/report", nullptr, "", {{"preset", "cheap"}}).status, 422);
    auto t = call("GET", "/gas/report", nullptr, "", {{"format", "text"}});
    EXPECT_EQ(t.content_type, "text/plain");
    EXPECT_NE(t.body.find("1917322"), std::string::npos);
}

TEST_F(ApiTest, HealthAndUnknownRoutes) {
    auto h = body(call("GET", "/health"));
    EXPECT_EQ(h["status"], "ok");
    EXPECT_EQ(h["time"], kMar27);
    EXPECT_EQ(call("GET", "/nope").status, 404);
    EXPECT_EQ(call("POST", "/users", "[not json", login(alice_)).status, 422);
}

class QuotaApiTest : public ApiTest {
protected:
    QuotaApiTest()
        : ApiTest([](NodeConfig& c) {
              c.quota.max_pinned_files = 2;
              c.upload_cap = 1024;
          }) {}
};

TEST_F(QuotaApiTest, LimitsMapToStatuses) {
    std::string a = register_and_login(alice_, "alice");
    std::string group = create_group(a);
    auto upload = [&](const Bytes& data, const std::string& name) {
        return call("POST", "/assets", {{"file_name", name}, {"group", group}, {"content_base64", base64_encode(data)}}, a);
    };
    EXPECT_EQ(upload(Bytes(1025, 1), "big").status, 413);
    EXPECT_EQ(upload(Bytes(10, 1), "one").status, 201);
    EXPECT_EQ(upload(Bytes(10, 2), "two").status, 201);
    auto full = upload(Bytes(10, 3), "three");
    EXPECT_EQ(full.status, 507);
    EXPECT_EQ(body(full)["error"], "QuotaExceededFiles");
    EXPECT_EQ(body(call("GET", "/groups/" + group + "/files", nullptr, a))["files"].size(), 2u);
}

class WallClockApiTest : public ApiTest {
protected:
    WallClockApiTest() : ApiTest([](NodeConfig& c) { c.demo_clock = false; }) {}
};

TEST_F(WallClockApiTest, LedgerFollowsWallClock) {
    EXPECT_EQ(call("POST", "/ledger/time", {{"time", kMar28}}).status, 404);
    EXPECT_EQ(body(call("GET", "/health"))["time"], wall_);
    wall_ += 100;
    EXPECT_EQ(body(call("GET", "/health"))["time"], wall_);
}

TEST(ApiRestart, LogReplaysAcrossRestart) {
    test::TempDir dir;
    NodeConfig cfg;
    cfg.store_root = dir / "store";
    cfg.ledger_log = dir / "ledger.log";
    cfg.demo_clock = true;
    cfg.genesis_time = kMar27;
    std::int64_t wall = 1'800'000'000;
    json before;
    std::string group;
    {
        Service s(cfg, [&] { return wall; });
        auto c = json::parse(s.handle({"POST", "/auth/challenge", {}, {}, "", {}}).body);
        auto sig = wallet::sign_auth(key_wallet(1), c["challenge"].get<std::string>());
        auto token = json::parse(s.handle({"POST", "/auth/login", {}, {}, to_json(sig).dump(), {}}).body)["token"];
        std::map<std::string, std::string> auth{{"authorization", "Bearer " + token.get<std::string>()}};
        s.handle({"POST", "/users", {}, auth, R"({"username":"alice"})", {}});
        group = json::parse(s.handle({"POST", "/groups", {}, auth, R"({"group_name":"G"})", {}}).body)["group"];
        s.handle({"POST", "/ledger/time", {}, {}, R"({"time":"2024-03-29"})", {}});
        before = json::parse(s.handle({"GET", "/health", {}, {}, "", {}}).body);
    }
    Service again(cfg, [&] { return wall; });
    json after = json::parse(again.handle({"GET", "/health", {}, {}, "", {}}).body);
    EXPECT_EQ(after["state_root"], before["state_root"]);
    EXPECT_EQ(after["height"], before["height"]);
    EXPECT_TRUE(again.platform().group_exists(contracts::ContractId::parse(group)));
}

TEST(HttpServer, ServesOverLoopback) {
    test::TempDir dir;
    NodeConfig cfg;
    cfg.store_root = dir / "store";
    cfg.demo_clock = true;
    cfg.genesis_time = kMar27;
    Service service(cfg);
    HttpServer server(service);
    int port = server.start("127.0.0.1", 0);
    ASSERT_GT(port, 0);

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);

    auto challenge = client.Post("/auth/challenge", "", "application/json");
    ASSERT_TRUE(challenge);
    auto sig = wallet::sign_auth(key_wallet(1), json::parse(challenge->body)["challenge"].get<std::string>());
    auto login = client.Post("/auth/login", to_json(sig).dump(), "application/json");
    ASSERT_TRUE(login);
    ASSERT_EQ(login->status, 200);
    std::string token = json::parse(login->body)["token"];
    httplib::Headers auth{{"Authorization", "Bearer " + token}};
    client.Post("/users", auth, R"({"username":"alice"})", "application/json");
    auto group = client.Post("/groups", auth, R"({"group_name":"G"})", "application/json");
    ASSERT_EQ(group->status, 201);
    std::string gid = json::parse(group->body)["group"];

    httplib::MultipartFormDataItems items{{"file", "multipart body", "m.txt", "text/plain"}, {"group", gid, "", ""}};
    auto up = client.Post("/assets", auth, items);
    ASSERT_TRUE(up);
    ASSERT_EQ(up->status, 201) << up->body;
    auto down = client.Get("/assets/" + json::parse(up->body)["cid"].get<std::string>(), auth);
    ASSERT_TRUE(down);
    EXPECT_EQ(down->body, "multipart body");
    EXPECT_EQ(down->get_header_value("X-File-Name"), "m.txt");
    server.stop();
}

}  // namespace
}  // namespace dvre::api
