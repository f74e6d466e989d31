// dvre: command-line client and node launcher.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "dvre/api/json_codec.hpp"
#include "dvre/api/server.hpp"
#include "dvre/api/service.hpp"
#include "dvre/common/error.hpp"
#include "dvre/contracts/dates.hpp"
#include "dvre/contracts/gas_study.hpp"
#include "dvre/contracts/platform.hpp"
#include "dvre/ledger/ledger.hpp"
#include "dvre/wallet/wallet.hpp"

namespace {

using dvre::Error;
using dvre::ErrorCode;
using nlohmann::json;
namespace fs = std::filesystem;

enum Exit : int { kOk = 0, kOther = 1, kAuth = 2, kDenied = 3, kQuota = 4, kNetwork = 5 };

/// Non-2xx answer from the server, or no answer at all (status 0).
struct RemoteError : std::runtime_error {
    RemoteError(int status, std::string code, const std::string& message, json body = nullptr)
        : std::runtime_error(message), status(status), code(std::move(code)), body(std::move(body)) {}
    int status;
    std::string code;
    json body;
};

int exit_for_status(int status) {
    switch (status) {
        case 0:
        case 502:
        case 503:
        case 504: return kNetwork;
        case 401: return kAuth;
        case 403: return kDenied;
        case 507: return kQuota;
        default: return kOther;
    }
}

int exit_for_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::ChallengeMismatch:
        case ErrorCode::SignatureInvalid: return kAuth;
        case ErrorCode::AccessDenied:
        case ErrorCode::NotMember:
        case ErrorCode::OwnerMismatch:
        case ErrorCode::AddressMismatch:
        case ErrorCode::Reverted: return kDenied;
        case ErrorCode::QuotaExceededFiles:
        case ErrorCode::QuotaExceededBytes: return kQuota;
        case ErrorCode::NodeUnavailable: return kNetwork;
        default: return kOther;
    }
}

std::string pct_decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            out.push_back(static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16)));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

class Remote {
public:
    explicit Remote(const std::string& url) : client_(url) {
        client_.set_connection_timeout(5);
        client_.set_read_timeout(120);
        client_.set_write_timeout(120);
    }

    json call(const std::string& method, const std::string& path, const json& body = nullptr) {
        httplib::Result res = send(method, path, body);
        return parse(res);
    }

    json upload(const std::string& path, httplib::MultipartFormDataItems items) {
        return parse(client_.Post(path, headers(), items));
    }

    httplib::Result get_raw(const std::string& path) {
        auto res = client_.Get(path, headers());
        if (!res) throw RemoteError(0, "NetworkError", "cannot reach server: " + httplib::to_string(res.error()));
        if (res->status >= 300) parse(res);
        return res;
    }

    void login(const dvre::wallet::Wallet& wallet) {
        json ch = call("POST", "/auth/challenge", json::object());
        auto sig = dvre::wallet::sign_auth(wallet, ch.at("challenge").get<std::string>());
        json session = call("POST", "/auth/login", dvre::api::to_json(sig));
        token_ = session.at("token").get<std::string>();
        login_response_ = session;
    }

    const json& login_response() const { return login_response_; }

private:
    httplib::Headers headers() const {
        httplib::Headers h;
        if (!token_.empty()) h.emplace("Authorization", "Bearer " + token_);
        return h;
    }

    httplib::Result send(const std::string& method, const std::string& path, const json& body) {
        const std::string text = body.is_null() ? std::string() : body.dump();
        if (method == "GET") return client_.Get(path, headers());
        return client_.Post(path, headers(), text, "application/json");
    }

    static json parse(const httplib::Result& res) {
        if (!res) throw RemoteError(0, "NetworkError", "cannot reach server: " + httplib::to_string(res.error()));
        json body;
        try {
            body = res->body.empty() ? json::object() : json::parse(res->body);
        } catch (const json::exception&) {
            body = {{"message", res->body}};
        }
        if (res->status >= 300) {
            std::string code = body.is_object() && body.contains("error") ? body["error"].get<std::string>() : "HttpError";
            std::string message = body.is_object() && body.contains("message") ? body["message"].get<std::string>()
                                                                                 : "HTTP " + std::to_string(res->status);
            throw RemoteError(res->status, code, message, body);
        }
        return body;
    }

    httplib::Client client_;
    std::string token_;
    json login_response_;
};

struct Globals {
    std::string server = "http://127.0.0.1:8645";
    std::string keyfile = "dvre.key";
    std::string output = "table";

    bool json_out() const { return output == "json"; }
};

dvre::wallet::Wallet load_wallet(const Globals& g) { return dvre::wallet::load_key_file(g.keyfile); }

Remote logged_in(const Globals& g) {
    Remote r(g.server);
    r.login(load_wallet(g));
    return r;
}

void print_receipt_line(const json& receipt) {
    std::cout << "status:    " << receipt.value("status", "") << "\n"
              << "gas_used:  " << receipt.value("gas_used", 0) << "\n"
              << "block:     " << receipt.value("block_height", 0) << " at "
              << dvre::contracts::format_time(receipt.value("block_time", std::int64_t{0})) << "\n";
    for (const auto& e : receipt.value("events", json::array())) {
        std::cout << "event:     " << e.value("name", "") << ": " << e.value("message", "") << "\n";
    }
}

void emit(const Globals& g, const json& doc, const std::function<void()>& table) {
    if (g.json_out()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        table();
    }
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Keeps only the final path component so a server cannot choose where we write.
std::string safe_file_name(const std::string& name) {
    std::string base = fs::path(name).filename().string();
    if (base.empty() || base == "." || base == "..") return "download.bin";
    return base;
}

int run_serve(dvre::api::NodeConfig config) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    dvre::api::Service service(config);
    dvre::api::HttpServer server(service);
    int port = server.start(config.bind, config.port);
    std::cout << "listening on http://" << config.bind << ":" << port << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dvre: research data sharing over a group ledger, threshold key network and block store"};
    app.require_subcommand(1);
    Globals g;
    if (const char* s = std::getenv("DVRE_SERVER")) g.server = s;
    if (const char* k = std::getenv("DVRE_KEYFILE")) g.keyfile = k;
    app.add_option("--server", g.server, "Node URL (env DVRE_SERVER)");
    app.add_option("--keyfile", g.keyfile, "Wallet key file (env DVRE_KEYFILE)");
    app.add_option("--output", g.output, "Output format")->check(CLI::IsMember({"json", "table"}));

    std::function<int()> action;

    // wallet
    auto* wallet_cmd = app.add_subcommand("wallet", "Local key management");
    wallet_cmd->require_subcommand(1);
    bool force = false;
    std::string entropy_hex;
    auto* wallet_new = wallet_cmd->add_subcommand("new", "Create a key file");
    wallet_new->add_flag("--force", force, "Overwrite an existing key file");
    wallet_new->add_option("--entropy", entropy_hex, "32-byte private key as hex (default: random)");
    wallet_new->callback([&] {
        action = [&] {
            if (fs::exists(g.keyfile) && !force) {
                throw Error(ErrorCode::InvalidArgument, g.keyfile + " exists; pass --force to replace it");
            }
            std::optional<dvre::Bytes> entropy;
            if (!entropy_hex.empty()) entropy = dvre::from_hex(entropy_hex);
            auto w = entropy ? dvre::wallet::generate_wallet(dvre::ByteView(*entropy)) : dvre::wallet::generate_wallet();
            dvre::wallet::save_key_file(g.keyfile, w);
            json doc = {{"address", w.address.to_checksum_hex()}, {"keyfile", g.keyfile}};
            emit(g, doc, [&] { std::cout << w.address.to_checksum_hex() << "\n"; });
            return kOk;
        };
    });
    auto* wallet_show = wallet_cmd->add_subcommand("show", "Print the key file's address");
    wallet_show->callback([&] {
        action = [&] {
            auto w = load_wallet(g);
            emit(g, {{"address", w.address.to_checksum_hex()}}, [&] { std::cout << w.address.to_checksum_hex() << "\n"; });
            return kOk;
        };
    });

    // login
    auto* login_cmd = app.add_subcommand("login", "Sign a challenge and open a session");
    login_cmd->callback([&] {
        action = [&] {
            Remote r = logged_in(g);
            const json& s = r.login_response();
            emit(g, s, [&] {
                std::cout << "address:   " << s.value("address", "") << "\n"
                          << "token:     " << s.value("token", "") << "\n"
                          << "expires:   " << dvre::contracts::format_time(s.value("expires_at", std::int64_t{0})) << "\n";
            });
            return kOk;
        };
    });

    // register
    std::string username, organization, country;
    auto* register_cmd = app.add_subcommand("register", "Register the wallet as a platform user");
    register_cmd->add_option("--username", username)->required();
    register_cmd->add_option("--organization", organization);
    register_cmd->add_option("--country", country);
    register_cmd->callback([&] {
        action = [&] {
            Remote r = logged_in(g);
            json res = r.call("POST", "/users",
                              {{"username", username}, {"organization", organization}, {"country", country}});
            emit(g, res, [&] {
                std::cout << "user contract: " << res.value("user_contract", "") << "\n";
                print_receipt_line(res["receipt"]);
            });
            return kOk;
        };
    });

    // user get
    std::string user_address;
    auto* user_cmd = app.add_subcommand("user", "User queries");
    user_cmd->require_subcommand(1);
    auto* user_get = user_cmd->add_subcommand("get", "Show a registered user");
    user_get->add_option("address", user_address)->required();
    user_get->callback([&] {
        action = [&] {
            Remote r(g.server);
            json res = r.call("GET", "/users/" + user_address);
            emit(g, res, [&] {
                for (const auto& [k, v] : res.items()) std::cout << k << ": " << v.get<std::string>() << "\n";
            });
            return kOk;
        };
    });

    // group
    auto* group_cmd = app.add_subcommand("group", "Group contracts");
    group_cmd->require_subcommand(1);
    std::string group_name, permissions = "Full Access", orgs, countries;
    auto* group_create = group_cmd->add_subcommand("create", "Deploy a group contract");
    group_create->add_option("--name", group_name)->required();
    group_create->add_option("--permissions", permissions);
    group_create->add_option("--orgs", orgs, "Comma-separated organizations");
    group_create->add_option("--countries", countries, "Comma-separated countries");
    group_create->callback([&] {
        action = [&] {
            Remote r = logged_in(g);
            json res = r.call("POST", "/groups",
                              {{"group_name", group_name},
                               {"permissions", permissions},
                               {"organizations", split_csv(orgs)},
                               {"countries", split_csv(countries)}});
            emit(g, res, [&] {
                std::cout << res.value("group", "") << "\n";
                print_receipt_line(res["receipt"]);
            });
            return kOk;
        };
    });

    std::string group_id, member, from = "", to = "unlimited";
    auto* add_member = group_cmd->add_subcommand("add-member", "Grant a member an access window");
    add_member->add_option("--group", group_id)->required();
    add_member->add_option("--member", member)->required();
    add_member->add_option("--from", from, "YYYY-MM-DD or RFC 3339 (default: now)");
    add_member->add_option("--to", to, "YYYY-MM-DD, RFC 3339 or 'unlimited'");
    add_member->callback([&] {
        action = [&] {
            using dvre::contracts::DateBound;
            json access = {{"eoa_address", dvre::Address::parse(member).to_checksum_hex()},
                           {"access_to", dvre::contracts::parse_time(to, DateBound::End)}};
            if (!from.empty()) access["access_from"] = dvre::contracts::parse_time(from, DateBound::Start);
            else access["access_from"] = static_cast<std::int64_t>(std::time(nullptr));
            Remote r = logged_in(g);
            json res = r.call("POST", "/groups/" + group_id + "/members", {{"members", json::array({access})}});
            emit(g, res, [&] { print_receipt_line(res["receipt"]); });
            return kOk;
        };
    });

    std::string share_path, share_name, share_cid, share_acc;
    auto* share_file = group_cmd->add_subcommand("share-file", "Encrypt, pin and register a file with a group");
    share_file->add_option("--group", group_id)->required();
    auto* file_opt = share_file->add_option("--file", share_path, "File to encrypt and upload");
    auto* cid_opt = share_file->add_option("--cid", share_cid, "Register an already pinned bundle instead");
    file_opt->excludes(cid_opt);
    share_file->add_option("--name", share_name, "File name recorded on the ledger (default: the file's name)");
    share_file->add_option("--acc", share_acc, "Access condition JSON (default: group membership)");
    share_file->callback([&] {
        action = [&] {
            Remote r = logged_in(g);
            json res;
            if (!share_cid.empty()) {
                if (share_name.empty()) throw Error(ErrorCode::InvalidArgument, "--cid needs --name");
                res = r.call("POST", "/groups/" + group_id + "/files",
                             {{"files", json::array({{{"ipfs_hash", share_cid}, {"file_name", share_name}}})}});
            } else {
                if (share_path.empty()) throw Error(ErrorCode::InvalidArgument, "pass --file or --cid");
                std::string name = share_name.empty() ? fs::path(share_path).filename().string() : share_name;
                httplib::MultipartFormDataItems items = {
                    {"file", read_file(share_path), name, "application/octet-stream"},
                    {"group", group_id, "", ""},
                };
                if (!share_acc.empty()) items.push_back({"acc", share_acc, "", ""});
                res = r.upload("/assets", items);
            }
            emit(g, res, [&] {
                if (res.contains("cid")) std::cout << res["cid"].get<std::string>() << "\n";
                print_receipt_line(res["receipt"]);
            });
            return kOk;
        };
    });

    auto* group_list = group_cmd->add_subcommand("list", "List groups");
    group_list->callback([&] {
        action = [&] {
            Remote r = logged_in(g);
            json res = r.call("GET", "/groups");
            emit(g, res, [&] {
                for (const auto& grp : res["groups"]) {
                    std::cout << grp.value("id", "") << "  " << grp.value("group_name", "") << "  owner "
                              << grp.value("group_owner_address", "") << "\n";
                }
            });
            return kOk;
        };
    });

    auto* group_files = group_cmd->add_subcommand("files", "List a group's files");
    group_files->add_option("--group", group_id)->required();
    group_files->callback([&] {
        action = [&] {
            Remote r = logged_in(g);
            json res = r.call("GET", "/groups/" + group_id + "/files");
            emit(g, res, [&] {
                for (const auto& f : res["files"]) {
                    std::cout << f.value("ipfs_hash", "") << "  " << f.value("file_name", "") << "  by "
                              << f.value("added_by", "") << "\n";
                }
            });
            return kOk;
        };
    });

    auto* group_members = group_cmd->add_subcommand("members", "List a group's members");
    group_members->add_option("--group", group_id)->required();
    group_members->callback([&] {
        action = [&] {
            Remote r = logged_in(g);
            json res = r.call("GET", "/groups/" + group_id + "/members");
            emit(g, res, [&] {
                for (const auto& m : res["members"]) {
                    std::cout << m.value("eoa_address", "") << "  "
                              << dvre::contracts::format_time(m.value("access_from", std::int64_t{0})) << " .. "
                              << dvre::contracts::format_time(m.value("access_to", std::int64_t{0})) << "\n";
                }
            });
            return kOk;
        };
    });

    // asset get
    std::string asset_cid, out_path;
    auto* asset_cmd = app.add_subcommand("asset", "Encrypted assets");
    asset_cmd->require_subcommand(1);
    auto* asset_get = asset_cmd->add_subcommand("get", "Decrypt and download an asset");
    asset_get->add_option("cid", asset_cid)->required();
    asset_get->add_option("--out", out_path, "Destination (default: the original file name)");
    asset_get->callback([&] {
        action = [&] {
            Remote r = logged_in(g);
            auto res = r.get_raw("/assets/" + asset_cid);
            std::string name = pct_decode(res->get_header_value("X-File-Name"));
            fs::path dest = out_path.empty() ? fs::path(safe_file_name(name)) : fs::path(out_path);
            std::ofstream out(dest, std::ios::binary | std::ios::trunc);
            out.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
            if (!out) throw Error(ErrorCode::IoError, "cannot write " + dest.string());
            json doc = {{"cid", asset_cid}, {"file_name", name}, {"path", dest.string()}, {"size", res->body.size()}};
            emit(g, doc, [&] { std::cout << dest.string() << " (" << res->body.size() << " bytes)\n"; });
            return kOk;
        };
    });

    // gas report
    std::string preset = "calibrated", gas_config;
    auto* gas_cmd = app.add_subcommand("gas", "Gas study");
    gas_cmd->require_subcommand(1);
    auto* gas_report = gas_cmd->add_subcommand("report", "Deploy and call every contract on a scratch ledger");
    gas_report->add_option("--preset", preset)->check(CLI::IsMember({"calibrated", "formula"}));
    gas_report->add_option("--config", gas_config, "Gas schedule file (key = value)");
    gas_report->callback([&] {
        action = [&] {
            auto schedule = gas_config.empty() ? dvre::ledger::GasSchedule::preset(preset)
                                               : dvre::ledger::GasSchedule::parse_config(read_file(gas_config));
            auto study = dvre::contracts::run_gas_study(schedule, gas_config.empty() ? preset : "custom");
            emit(g, dvre::api::to_json(study), [&] { std::cout << dvre::contracts::format_gas_table(study); });
            return kOk;
        };
    });

    // ledger
    auto* ledger_cmd = app.add_subcommand("ledger", "Ledger tools");
    ledger_cmd->require_subcommand(1);
    std::string log_path;
    std::optional<std::string> genesis;
    auto* replay = ledger_cmd->add_subcommand("replay", "Re-execute a transaction log and verify every receipt");
    replay->add_option("--log", log_path)->required();
    replay->add_option("--preset", preset)->check(CLI::IsMember({"calibrated", "formula"}));
    replay->add_option("--gas-config", gas_config);
    replay->add_option("--genesis-time", genesis);
    replay->callback([&] {
        action = [&] {
            std::vector<dvre::ledger::LogEntry> entries;
            std::istringstream in(read_file(log_path));
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty()) entries.push_back(dvre::ledger::parse_log_line(line));
            }
            dvre::contracts::PlatformOptions opts;
            opts.schedule = gas_config.empty() ? dvre::ledger::GasSchedule::preset(preset)
                                               : dvre::ledger::GasSchedule::parse_config(read_file(gas_config));
            opts.genesis_time = genesis ? dvre::contracts::parse_time(*genesis, dvre::contracts::DateBound::Start)
                                       : entries.empty() ? 0 : entries.front().block_time;
            auto platform = dvre::contracts::Platform::from_log(entries, opts);
            const auto& l = platform->ledger();
            json doc = {{"entries", entries.size()},
                        {"height", l.height()},
                        {"time", l.time()},
                        {"state_root", "0x" + dvre::to_hex(l.state_root())}};
            emit(g, doc, [&] {
                std::cout << "entries:    " << entries.size() << "\n"
                          << "height:     " << l.height() << "\n"
                          << "state root: 0x" << dvre::to_hex(l.state_root()) << "\n";
            });
            return kOk;
        };
    });

    std::string set_time_value;
    auto* set_time = ledger_cmd->add_subcommand("set-time", "Advance a demo-mode node's ledger clock");
    set_time->add_option("time", set_time_value)->required();
    set_time->callback([&] {
        action = [&] {
            Remote r(g.server);
            auto t = dvre::contracts::parse_time(set_time_value, dvre::contracts::DateBound::Start);
            json res = r.call("POST", "/ledger/time", {{"time", t}});
            emit(g, res, [&] { std::cout << dvre::contracts::format_time(res.value("time", std::int64_t{0})) << "\n"; });
            return kOk;
        };
    });

    // serve
    std::string config_path, bind, store_root, ledger_log, gas_preset_flag;
    std::optional<int> port;
    std::optional<unsigned> n, t;
    std::optional<std::string> serve_genesis;
    bool demo_clock = false, paper_faithful = false;
    auto* serve = app.add_subcommand("serve", "Run a node: ledger, key network, block store and HTTP API");
    serve->add_option("--config", config_path, "JSON config file");
    serve->add_option("--bind", bind);
    serve->add_option("--port", port, "0 picks a free port");
    serve->add_option("--store-root", store_root);
    serve->add_option("--ledger-log", ledger_log);
    serve->add_option("--gas-preset", gas_preset_flag)->check(CLI::IsMember({"calibrated", "formula"}));
    serve->add_option("--keynet-n", n);
    serve->add_option("--keynet-t", t);
    serve->add_option("--genesis-time", serve_genesis);
    serve->add_flag("--demo-clock", demo_clock, "Ledger time moves only via POST /ledger/time");
    serve->add_flag("--paper-faithful-add-files", paper_faithful, "Let any caller share files into a group");
    serve->callback([&] {
        action = [&] {
            auto config = config_path.empty() ? dvre::api::NodeConfig{} : dvre::api::NodeConfig::from_file(config_path);
            config.apply_env();
            if (!bind.empty()) config.bind = bind;
            if (port) config.port = *port;
            if (!store_root.empty()) config.store_root = store_root;
            if (!ledger_log.empty()) config.ledger_log = ledger_log;
            if (!gas_preset_flag.empty()) config.gas_preset = gas_preset_flag;
            if (n) config.keynet.n = *n;
            if (t) config.keynet.t = *t;
            if (serve_genesis) config.genesis_time = dvre::contracts::parse_time(*serve_genesis, dvre::contracts::DateBound::Start);
            if (demo_clock) config.demo_clock = true;
            if (paper_faithful) config.paper_faithful_add_files = true;
            return run_serve(config);
        };
    });

    CLI11_PARSE(app, argc, argv);

    try {
        return action ? action() : kOther;
    } catch (const RemoteError& e) {
        if (g.json_out()) {
            json doc = e.body.is_object() ? e.body : json::object();
            doc["error"] = e.code;
            doc["message"] = e.what();
            doc["status"] = e.status;
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.code << ": " << e.what() << "\n";
        }
        return exit_for_status(e.status);
    } catch (const Error& e) {
        if (g.json_out()) {
            std::cout << json{{"error", dvre::to_string(e.code())}, {"message", e.what()}}.dump(2) << "\n";
        } else {
            std::cerr << "error: " << dvre::to_string(e.code()) << ": " << e.what() << "\n";
        }
        return exit_for_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
}
