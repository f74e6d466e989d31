#include <httplib.h>
#include <json.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "dvre/api/json_codec.hpp"
#include "support.hpp"

namespace dvre {
namespace {

using json = nlohmann::json;

const std::string kCli = DVRE_CLI_PATH;

struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    CliRun r;
    FILE* p = ::popen((kCli + " " + args + " 2>&1").c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = ::pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

/// `dvre serve` on a free port, demo clock starting at 2024-03-27.
class ServerProcess {
public:
    explicit ServerProcess(const std::filesystem::path& root) {
        int fds[2];
        if (::pipe(fds) != 0) throw std::runtime_error("pipe");
        pid_ = ::fork();
        if (pid_ == 0) {
            ::dup2(fds[1], STDOUT_FILENO);
            ::close(fds[0]);
            ::close(fds[1]);
            const std::string store = (root / "store").string();
            const std::string log = (root / "ledger.log").string();
            const std::string genesis = std::to_string(test::kMar27);
            ::execl(kCli.c_str(), kCli.c_str(), "serve", "--port", "0", "--demo-clock", "--genesis-time",
                    genesis.c_str(), "--store-root", store.c_str(), "--ledger-log", log.c_str(),
                    static_cast<char*>(nullptr));
            ::_exit(127);
        }
        ::close(fds[1]);
        FILE* out = ::fdopen(fds[0], "r");
        char line[256];
        while (std::fgets(line, sizeof line, out)) {
            std::string s(line);
            if (auto at = s.find("listening on http://"); at != std::string::npos) {
                url_ = s.substr(at + 13);
                while (!url_.empty() && std::isspace(static_cast<unsigned char>(url_.back()))) url_.pop_back();
                port_ = std::stoi(url_.substr(url_.rfind(':') + 1));
                break;
            }
        }
        out_ = out;
    }
    ~ServerProcess() {
        if (pid_ > 0) {
            ::kill(pid_, SIGTERM);
            int status;
            ::waitpid(pid_, &status, 0);
        }
        if (out_) std::fclose(out_);
    }

    const std::string& url() const { return url_; }
    int port() const { return port_; }

private:
    pid_t pid_ = -1;
    FILE* out_ = nullptr;
    std::string url_;
    int port_ = 0;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        server_ = std::make_unique<ServerProcess>(dir_ / "node");
        ASSERT_GT(server_->port(), 0);
        make_key("alice", 1);
        make_key("bob", 2);
        make_key("carol", 3);
    }

    void make_key(const std::string& who, int n) {
        std::string hex(63, '0');
        hex += static_cast<char>('0' + n);
        ASSERT_EQ(run("--keyfile " + key(who) + " wallet new --entropy " + hex).exit_code, 0);
    }

    std::string key(const std::string& who) const { return (dir_ / (who + ".key")).string(); }

    CliRun as(const std::string& who, const std::string& args, const std::string& output = "json") {
        return run("--server " + server_->url() + " --keyfile " + key(who) + " --output " + output + " " + args);
    }

    json as_json(const std::string& who, const std::string& args) {
        CliRun r = as(who, args);
        EXPECT_EQ(r.exit_code, 0) << r.out;
        return json::parse(r.out);
    }

    test::TempDir dir_;
    std::unique_ptr<ServerProcess> server_;
};

TEST_F(CliTest, WalletAddressesFollowKeys) {
    CliRun r = run("--keyfile " + key("alice") + " wallet show");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, "0x7E5F4552091A69125d5DfCb7b8C2659029395Bdf\n");
    EXPECT_NE(run("--keyfile " + key("alice") + " wallet new").exit_code, 0) << "refuses to overwrite";
    EXPECT_NE(run("--keyfile " + (dir_ / "missing.key").string() + " wallet show").exit_code, 0);
}

TEST_F(CliTest, GasReportRunsLocally) {
    CliRun r = run("gas report");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("2738927"), std::string::npos);
    EXPECT_NE(r.out.find("489248"), std::string::npos);
    CliRun f = run("--output json gas report --preset formula");
    ASSERT_EQ(f.exit_code, 0);
    EXPECT_TRUE(json::parse(f.out)["deployment_ordering"].get<bool>());
}

TEST_F(CliTest, FullScenarioWithExitCodes) {
    auto reg = as_json("alice", "register --username alice --organization UvA --country Netherlands");
    EXPECT_EQ(reg["receipt"]["gas_used"], 1535460);
    as_json("bob", "register --username bob --organization UiS --country Norway");
    std::string group = as_json("alice", "group create --name DataSharing --orgs UvA,UiS")["group"];

    CliRun denied = as("bob", "group add-member --group " + group + " --member " +
                               "0x2B5AD5c4795c026514f8317c7a215E218DcCD6cF --from 2024-03-27 --to 2024-03-29",
                    "table");
    EXPECT_EQ(denied.exit_code, 3);
    EXPECT_NE(denied.out.find("Only group owner can call this function"), std::string::npos);
    as_json("alice", "group add-member --group " + group +
                         " --member 0x2B5AD5c4795c026514f8317c7a215E218DcCD6cF --from 2024-03-27 --to 2024-03-29");

    std::ofstream(dir_ / "scan.bin") << "volumetric scan";
    std::string cid = as_json("alice", "group share-file --group " + group + " --file " + (dir_ / "scan.bin").string() +
                                           " --name '#binary#scan.bin'")["cid"];

    ASSERT_EQ(run("--server " + server_->url() + " ledger set-time 2024-03-28").exit_code, 0);
    const std::string out = (dir_ / "got.bin").string();
    ASSERT_EQ(as("bob", "asset get " + cid + " --out " + out).exit_code, 0);
    auto files = as_json("bob", "group files --group " + group);
    EXPECT_EQ(files["files"].size(), 1u);
    std::ifstream in(out);
    EXPECT_EQ(std::string(std::istreambuf_iterator<char>(in), {}), "volumetric scan");

    ASSERT_EQ(run("--server " + server_->url() + " ledger set-time 2024-03-30").exit_code, 0);
    CliRun late = as("bob", "asset get " + cid + " --out " + out, "table");
    EXPECT_EQ(late.exit_code, 3);
    EXPECT_NE(late.out.find("acc_failed"), std::string::npos);
    EXPECT_EQ(as("alice", "asset get " + cid + " --out " + out).exit_code, 0);

    EXPECT_EQ(as("carol", "group create --name X").exit_code, 3);
    EXPECT_EQ(as("alice", "user get 0x0000000000000000000000000000000000000009").exit_code, 1);
    EXPECT_EQ(run("--server http://127.0.0.1:1 --keyfile " + key("alice") + " login").exit_code, 5);
}

TEST_F(CliTest, LedgerReplayMatchesLiveState) {
    as_json("alice", "register --username alice");
    as_json("alice", "group create --name G");
    httplib::Client client("127.0.0.1", server_->port());
    auto health = json::parse(client.Get("/health")->body);
    CliRun r = run("--output json ledger replay --log " + (dir_ / "node" / "ledger.log").string());
    ASSERT_EQ(r.exit_code, 0) << r.out;
    EXPECT_EQ(json::parse(r.out)["state_root"], health["state_root"]);
}

// The same operations through the CLI against one node and through raw HTTP
// against another must produce identical receipts and state.
TEST_F(CliTest, CliAndHttpAgree) {
    ServerProcess other(dir_ / "other");
    httplib::Client http("127.0.0.1", other.port());
    auto login = [&](std::uint8_t n) {
        auto c = json::parse(http.Post("/auth/challenge", "", "application/json")->body);
        auto sig = wallet::sign_auth(test::key_wallet(n), c["challenge"].get<std::string>());
        auto s = json::parse(http.Post("/auth/login", api::to_json(sig).dump(), "application/json")->body);
        return httplib::Headers{{"Authorization", "Bearer " + s["token"].get<std::string>()}};
    };
    auto post = [&](const httplib::Headers& h, const std::string& path, const json& body) {
        auto r = http.Post(path, h, body.dump(), "application/json");
        EXPECT_TRUE(r && r->status < 300) << (r ? r->body : "no response");
        return json::parse(r->body);
    };
    auto events = [](const json& receipt) {
        json out = json::array();
        for (const auto& e : receipt["events"]) out.push_back({e["contract"], e["name"], e["message"]});
        return out;
    };

    std::vector<std::pair<json, json>> pairs;
    pairs.emplace_back(as_json("alice", "register --username alice --organization UvA --country Netherlands")["receipt"],
                       post(login(1), "/users",
                            {{"username", "alice"}, {"organization", "UvA"}, {"country", "Netherlands"}})["receipt"]);
    pairs.emplace_back(as_json("bob", "register --username bob")["receipt"],
                       post(login(2), "/users", {{"username", "bob"}})["receipt"]);
    json cli_group = as_json("alice", "group create --name DataSharing --permissions 'Full Access' --orgs UvA,UiS");
    json http_group = post(login(1), "/groups",
                           {{"group_name", "DataSharing"}, {"permissions", "Full Access"}, {"organizations", {"UvA", "UiS"}}});
    EXPECT_EQ(cli_group["group"], http_group["group"]);
    pairs.emplace_back(cli_group["receipt"], http_group["receipt"]);
    std::string group = cli_group["group"];
    const std::string bob = "0x2B5AD5c4795c026514f8317c7a215E218DcCD6cF";
    pairs.emplace_back(
        as_json("alice", "group add-member --group " + group + " --member " + bob + " --from 2024-03-27 --to 2024-03-29")
            ["receipt"],
        post(login(1), "/groups/" + group + "/members",
             {{"eoa_address", bob}, {"access_from", "2024-03-27"}, {"access_to", "2024-03-29"}})["receipt"]);
    pairs.emplace_back(
        as_json("bob", "group share-file --group " + group + " --cid dvre1-" + std::string(64, 'a') + " --name x.csv")
            ["receipt"],
        post(login(2), "/groups/" + group + "/files",
             {{"ipfs_hash", "dvre1-" + std::string(64, 'a')}, {"file_name", "x.csv"}})["receipt"]);

    for (const auto& [cli, raw] : pairs) {
        EXPECT_EQ(events(cli), events(raw));
        EXPECT_EQ(cli["gas_used"], raw["gas_used"]);
        EXPECT_EQ(cli["status"], raw["status"]);
        EXPECT_EQ(cli["tx_hash"], raw["tx_hash"]);
    }
    httplib::Client mine("127.0.0.1", server_->port());
    EXPECT_EQ(json::parse(mine.Get("/health")->body)["state_root"], json::parse(http.Get("/health")->body)["state_root"]);
}

}  // namespace
}  // namespace dvre
