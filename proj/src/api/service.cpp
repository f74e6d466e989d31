#include "dvre/api/service.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include "dvre/api/json_codec.hpp"
#include "dvre/common/base64.hpp"
#include "dvre/common/error.hpp"
#include "dvre/contracts/dates.hpp"
#include "dvre/contracts/gas_study.hpp"
#include "dvre/crypto/random.hpp"

namespace dvre::api {

using contracts::ContractId;
using contracts::Timestamp;

namespace {

constexpr std::int64_t kChallengeTtl = 300;

/// Failure that is decided at the HTTP layer rather than by a module.
struct HttpError : std::runtime_error {
    HttpError(int status, std::string code, const std::string& message)
        : std::runtime_error(message), status(status), code(std::move(code)) {}
    int status;
    std::string code;
};

HttpResponse json_response(int status, const json& body) { return HttpResponse{status, "application/json", body.dump(), {}}; }

HttpResponse error_response(int status, std::string_view code, std::string_view message) {
    return json_response(status, {{"error", code}, {"message", message}});
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '/')) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

std::string pct_encode(std::string_view s) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 15]);
        }
    }
    return out;
}

std::string ascii_filename(std::string_view s) {
    std::string out;
    for (unsigned char c : s) out.push_back(c < 0x20 || c >= 0x7f || c == '"' || c == '\\' ? '_' : static_cast<char>(c));
    return out;
}

ContractId parse_group(const std::string& text) { return ContractId::parse(text); }

template <class T, class F>
std::vector<T> one_or_many(const json& body, const char* list_key, const char* probe_key, F&& parse_one) {
    std::vector<T> out;
    if (body.contains(list_key)) {
        if (!body[list_key].is_array()) {
            throw Error(ErrorCode::InvalidArgument, std::string("\"") + list_key + "\" must be a list");
        }
        for (const auto& item : body[list_key]) out.push_back(parse_one(item));
    } else if (body.contains(probe_key)) {
        out.push_back(parse_one(body));
    } else {
        throw Error(ErrorCode::InvalidArgument, std::string("missing field \"") + list_key + "\"");
    }
    return out;
}

std::int64_t system_clock() { return static_cast<std::int64_t>(std::time(nullptr)); }

std::vector<ledger::LogEntry> read_log_file(const std::filesystem::path& path) {
    std::vector<ledger::LogEntry> entries;
    std::ifstream in(path);
    if (!in) return entries;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) entries.push_back(ledger::parse_log_line(line));
    }
    return entries;
}

}  // namespace

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidEntropy:
        case ErrorCode::InvalidWindow:
        case ErrorCode::DuplicateHash:
        case ErrorCode::BadThreshold:
        case ErrorCode::UnknownFunction:
        case ErrorCode::InsufficientShares:
        case ErrorCode::MixedKeyIds:
        case ErrorCode::NetworkMismatch:
            return 422;
        case ErrorCode::ChallengeMismatch:
        case ErrorCode::SignatureInvalid:
            return 401;
        case ErrorCode::Reverted:
        case ErrorCode::AddressMismatch:
        case ErrorCode::NotRegistered:
        case ErrorCode::OwnerMismatch:
        case ErrorCode::NotMember:
        case ErrorCode::AccessDenied:
            return 403;
        case ErrorCode::UnknownContract:
        case ErrorCode::UnknownGroup:
        case ErrorCode::NotFound:
        case ErrorCode::UnknownKeyId:
            return 404;
        case ErrorCode::AlreadyRegistered:
        case ErrorCode::BadNonce:
        case ErrorCode::TimeRegression:
            return 409;
        case ErrorCode::QuotaExceededFiles:
        case ErrorCode::QuotaExceededBytes:
            return 507;
        case ErrorCode::NodeUnavailable:
            return 503;
        case ErrorCode::IntegrityFailure:
        case ErrorCode::CorruptLog:
        case ErrorCode::IoError:
            return 500;
    }
    return 500;
}

Service::Service(NodeConfig config, WallClock wall_clock)
    : config_(std::move(config)), wall_clock_(wall_clock ? std::move(wall_clock) : WallClock(system_clock)) {
    contracts::PlatformOptions options;
    options.schedule = config_.gas_schedule();
    options.paper_faithful_add_files = config_.paper_faithful_add_files;

    std::vector<ledger::LogEntry> existing;
    if (config_.ledger_log) existing = read_log_file(*config_.ledger_log);
    if (!existing.empty()) {
        options.genesis_time = config_.genesis_time.value_or(existing.front().block_time);
        platform_ = contracts::Platform::from_log(existing, options);
    } else {
        options.genesis_time = config_.genesis_time.value_or(wall_clock_());
        platform_ = std::make_unique<contracts::Platform>(options);
    }

    if (config_.ledger_log) {
        if (config_.ledger_log->has_parent_path()) std::filesystem::create_directories(config_.ledger_log->parent_path());
        log_out_ = std::make_unique<std::ofstream>(*config_.ledger_log, std::ios::app);
        if (!*log_out_) throw Error(ErrorCode::IoError, "cannot open ledger log " + config_.ledger_log->string());
        if (existing.empty()) {
            for (const auto& e : platform_->ledger().log()) *log_out_ << ledger::format_log_line(e) << '\n';
            log_out_->flush();
        }
        platform_->ledger().set_log_sink([out = log_out_.get()](const ledger::LogEntry& e) {
            *out << ledger::format_log_line(e) << '\n';
            out->flush();
        });
    }
    if (!config_.demo_clock) platform_->ledger().set_clock(wall_clock_);

    store_ = std::make_unique<store::BlockStore>(config_.store_root, config_.quota, wall_clock_);
    keynet_ = std::make_unique<keynet::KeyNetwork>(config_.keynet, *platform_);
    keynet_->set_session_verifier([this](const wallet::AuthSig& sig) { return is_live_login(sig); });
}

Service::~Service() {
    // Nodes hold a callback into this object.
    keynet_->set_session_verifier({});
}

HttpResponse Service::handle(const HttpRequest& req) {
    try {
        return route(req);
    } catch (const contracts::TxFailed& e) {
        json body = {{"error", to_string(e.code())}, {"message", e.what()}, {"receipt", to_json(e.receipt())}};
        return json_response(http_status(e.code()), body);
    } catch (const HttpError& e) {
        return error_response(e.status, e.code, e.what());
    } catch (const Error& e) {
        return error_response(http_status(e.code()), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        return error_response(500, "Internal", e.what());
    }
}

HttpResponse Service::route(const HttpRequest& req) {
    const auto parts = split_path(req.path);
    const std::string& m = req.method;
    auto is = [&](std::initializer_list<std::string_view> shape) {
        if (parts.size() != shape.size()) return false;
        std::size_t i = 0;
        for (auto s : shape) {
            if (s != "*" && parts[i] != s) return false;
            ++i;
        }
        return true;
    };
    auto method_not_allowed = [] { return error_response(405, "MethodNotAllowed", "method not allowed"); };

    if (is({"auth", "challenge"})) return m == "POST" ? post_challenge(req) : method_not_allowed();
    if (is({"auth", "login"})) return m == "POST" ? post_login(req) : method_not_allowed();
    if (is({"users"})) return m == "POST" ? post_user(req) : method_not_allowed();
    if (is({"users", "*"})) return m == "GET" ? get_user(parts[1]) : method_not_allowed();
    if (is({"groups"})) {
        if (m == "POST") return post_group(req);
        if (m == "GET") return get_groups(req);
        return method_not_allowed();
    }
    if (is({"groups", "*"})) return m == "GET" ? get_group(req, parts[1]) : method_not_allowed();
    if (is({"groups", "*", "members"})) {
        if (m == "POST") return post_members(req, parts[1]);
        if (m == "GET") return get_members(req, parts[1]);
        return method_not_allowed();
    }
    if (is({"groups", "*", "files"})) {
        if (m == "POST") return post_files(req, parts[1]);
        if (m == "GET") return get_files(req, parts[1]);
        return method_not_allowed();
    }
    if (is({"assets"})) return m == "POST" ? post_asset(req) : method_not_allowed();
    if (is({"assets", "*"})) return m == "GET" ? get_asset(req, parts[1]) : method_not_allowed();
    if (is({"gas", "report"})) return m == "GET" ? get_gas_report(req) : method_not_allowed();
    if (is({"ledger", "time"}) && config_.demo_clock) return m == "POST" ? post_ledger_time(req) : method_not_allowed();
    if (is({"health"})) return m == "GET" ? get_health() : method_not_allowed();
    return error_response(404, "NotFound", "no route for " + req.method + " " + req.path);
}

Session Service::require_session(const HttpRequest& req) {
    auto it = req.headers.find("authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (it == req.headers.end() || !it->second.starts_with(kBearer)) {
        throw HttpError(401, "Unauthenticated", "missing bearer token");
    }
    const std::string token = it->second.substr(kBearer.size());
    std::lock_guard lock(auth_mu_);
    auto s = sessions_.find(token);
    if (s == sessions_.end()) throw HttpError(401, "Unauthenticated", "unknown session");
    if (s->second.expires_at <= wall_clock_()) {
        sessions_.erase(s);
        throw HttpError(401, "Unauthenticated", "session expired");
    }
    return s->second;
}

bool Service::is_live_login(const wallet::AuthSig& sig) {
    std::lock_guard lock(auth_mu_);
    const std::int64_t now = wall_clock_();
    for (const auto& [_, s] : sessions_) {
        if (s.expires_at > now && s.login.signature == sig.signature && s.login.signed_message == sig.signed_message &&
            s.login.address == sig.address) {
            return true;
        }
    }
    return false;
}

HttpResponse Service::post_challenge(const HttpRequest&) {
    const std::string challenge = wallet::make_login_challenge();
    const std::int64_t expires = wall_clock_() + kChallengeTtl;
    std::lock_guard lock(auth_mu_);
    challenges_[challenge] = Challenge{expires, false};
    return json_response(200, {{"challenge", challenge}, {"expires_at", expires}});
}

HttpResponse Service::post_login(const HttpRequest& req) {
    const wallet::AuthSig sig = auth_sig_from_json(parse_body(req.body));
    const std::string message = to_string(sig.signed_message);
    const std::int64_t now = wall_clock_();

    std::lock_guard lock(auth_mu_);
    auto it = challenges_.find(message);
    if (it == challenges_.end()) throw HttpError(401, "ChallengeMismatch", "challenge was not issued by this node");
    if (it->second.used) throw HttpError(409, "ChallengeReused", "challenge already used");
    if (it->second.expires_at <= now) throw HttpError(401, "ChallengeExpired", "challenge expired");
    const Address who = wallet::verify_auth(sig, message);
    it->second.used = true;

    Session s{to_hex(crypto::random_array<32>()), who, now + config_.session_ttl, sig};
    sessions_[s.token] = s;
    for (auto c = challenges_.begin(); c != challenges_.end();) {
        // Used challenges are kept until they expire so replays get 409.
        c = c->second.expires_at <= now ? challenges_.erase(c) : std::next(c);
    }
    return json_response(200,
                         {{"token", s.token}, {"address", who.to_checksum_hex()}, {"expires_at", s.expires_at}});
}

HttpResponse Service::post_user(const HttpRequest& req) {
    Session s = require_session(req);
    const json body = parse_body(req.body);
    contracts::UserProfile p;
    p.public_address = body.contains("public_address") ? Address::parse(body["public_address"].get<std::string>())
                                                        : s.address;
    auto str = [&](const char* key) {
        if (!body.contains(key)) return std::string();
        if (!body[key].is_string()) throw Error(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be a string");
        return body[key].get<std::string>();
    };
    p.username = str("username");
    p.organization = str("organization");
    p.country = str("country");
    if (p.username.empty()) throw Error(ErrorCode::InvalidArgument, "missing field \"username\"");
    ledger::Receipt r = platform_->register_user(s.address, p);
    auto contract = platform_->user_contract(s.address);
    return json_response(201, {{"user_contract", contract ? contract->str() : ""}, {"receipt", to_json(r)}});
}

HttpResponse Service::get_user(const std::string& address) {
    try {
        return json_response(200, to_json(platform_->get_user(Address::parse(address))));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotRegistered) return error_response(404, "NotRegistered", e.what());
        throw;
    }
}

HttpResponse Service::post_group(const HttpRequest& req) {
    Session s = require_session(req);
    const auto details = contract_details_from_json(parse_body(req.body), s.address);
    ledger::Receipt r = platform_->create_group(s.address, details);
    return json_response(201, {{"group", r.created ? r.created->str() : ""}, {"receipt", to_json(r)}});
}

HttpResponse Service::get_groups(const HttpRequest& req) {
    require_session(req);
    json groups = json::array();
    for (const auto& g : platform_->list_groups()) {
        json item = to_json(g.details);
        item["id"] = g.id.str();
        groups.push_back(item);
    }
    return json_response(200, {{"groups", groups}});
}

HttpResponse Service::get_group(const HttpRequest& req, const std::string& id) {
    require_session(req);
    const ContractId group = parse_group(id);
    json item = to_json(platform_->group_details(group));
    item["id"] = group.str();
    return json_response(200, item);
}

HttpResponse Service::post_members(const HttpRequest& req, const std::string& id) {
    Session s = require_session(req);
    const ContractId group = parse_group(id);
    auto users = one_or_many<contracts::UserAccess>(parse_body(req.body), "members", "eoa_address",
                                                    user_access_from_json);
    ledger::Receipt r = platform_->associate_users_to_group(group, s.address, users);
    return json_response(200, {{"receipt", to_json(r)}});
}

HttpResponse Service::get_members(const HttpRequest& req, const std::string& id) {
    require_session(req);
    json members = json::array();
    for (const auto& a : platform_->members(parse_group(id))) members.push_back(to_json(a));
    return json_response(200, {{"members", members}});
}

HttpResponse Service::post_files(const HttpRequest& req, const std::string& id) {
    Session s = require_session(req);
    const ContractId group = parse_group(id);
    auto files = one_or_many<contracts::FileInput>(parse_body(req.body), "files", "ipfs_hash", file_input_from_json);
    ledger::Receipt r = platform_->add_files_to_group(group, s.address, files);
    return json_response(200, {{"receipt", to_json(r)}});
}

HttpResponse Service::get_files(const HttpRequest& req, const std::string& id) {
    Session s = require_session(req);
    json files = json::array();
    for (const auto& f : platform_->list_group_files(parse_group(id), s.address)) files.push_back(to_json(f));
    return json_response(200, {{"files", files}});
}

HttpResponse Service::post_asset(const HttpRequest& req) {
    Session s = require_session(req);
    std::string group_text, file_name;
    Bytes content;
    std::optional<keynet::Acc> acc;
    if (auto f = req.form.find("file"); f != req.form.end()) {
        if (f->second.content.size() > config_.upload_cap) {
            throw HttpError(413, "PayloadTooLarge", "upload exceeds " + std::to_string(config_.upload_cap) + " bytes");
        }
        content = to_bytes(f->second.content);
        file_name = f->second.filename;
        if (auto n = req.form.find("file_name"); n != req.form.end()) file_name = n->second.content;
        if (auto g = req.form.find("group"); g != req.form.end()) group_text = g->second.content;
        if (auto a = req.form.find("acc"); a != req.form.end()) acc = keynet::acc_from_json(a->second.content);
    } else {
        const json body = parse_body(req.body);
        if (!body.contains("content_base64") || !body["content_base64"].is_string()) {
            throw Error(ErrorCode::InvalidArgument, "expected a multipart \"file\" part or \"content_base64\"");
        }
        content = base64_decode(body["content_base64"].get<std::string>());
        if (content.size() > config_.upload_cap) {
            throw HttpError(413, "PayloadTooLarge", "upload exceeds " + std::to_string(config_.upload_cap) + " bytes");
        }
        if (body.contains("file_name") && body["file_name"].is_string()) file_name = body["file_name"].get<std::string>();
        if (body.contains("group") && body["group"].is_string()) group_text = body["group"].get<std::string>();
        if (body.contains("acc")) acc = keynet::acc_from_json(body["acc"].dump());
    }
    if (file_name.empty()) throw Error(ErrorCode::InvalidArgument, "missing field \"file_name\"");
    if (group_text.empty()) throw Error(ErrorCode::InvalidArgument, "missing field \"group\"");
    const ContractId group = parse_group(group_text);
    if (!platform_->group_exists(group)) throw Error(ErrorCode::UnknownGroup, "no group contract at " + group.str());

    const keynet::SessionCredential credential(s.login);
    auto up = keynet::encrypt_file_and_upload({file_name, std::move(content)}, acc.value_or(keynet::group_member(group)),
                                              credential, *keynet_, *store_, *platform_);
    ledger::Receipt r;
    try {
        r = platform_->add_files_to_group(group, s.address, {{up.bundle_cid.str(), file_name}});
    } catch (...) {
        // The ledger refused the file: undo the pin and the key deposit.
        try {
            store_->unpin(up.bundle_cid);
        } catch (const Error&) {
        }
        keynet_->discard(up.key_id);
        throw;
    }
    json body = {{"cid", up.bundle_cid.str()},
                 {"file_name", up.file_name},
                 {"bundle_size", up.bundle_size},
                 {"key_id", to_hex(up.key_id)},
                 {"created_at", up.created_at},
                 {"receipt", to_json(r)}};
    return json_response(201, body);
}

HttpResponse Service::get_asset(const HttpRequest& req, const std::string& cid_text) {
    Session s = require_session(req);
    const store::Cid cid = store::Cid::parse(cid_text);
    const keynet::SessionCredential credential(s.login);
    keynet::NamedFile file = keynet::decrypt_file_and_download(cid, credential, *keynet_, *store_);
    HttpResponse resp{200, "application/octet-stream", to_string(file.content), {}};
    resp.headers["Content-Disposition"] =
        "attachment; filename=\"" + ascii_filename(file.name) + "\"; filename*=UTF-8''" + pct_encode(file.name);
    resp.headers["X-File-Name"] = pct_encode(file.name);
    return resp;
}

HttpResponse Service::get_gas_report(const HttpRequest& req) {
    ledger::GasSchedule schedule = platform_->ledger().schedule();
    std::string label = config_.gas_config ? "custom" : config_.gas_preset;
    if (auto p = req.query.find("preset"); p != req.query.end()) {
        schedule = ledger::GasSchedule::preset(p->second);
        label = p->second;
    }
    const contracts::GasStudy study = contracts::run_gas_study(schedule, label);
    if (auto f = req.query.find("format"); f != req.query.end() && f->second == "text") {
        return HttpResponse{200, "text/plain", contracts::format_gas_table(study), {}};
    }
    return json_response(200, to_json(study));
}

HttpResponse Service::post_ledger_time(const HttpRequest& req) {
    const json body = parse_body(req.body);
    if (!body.contains("time")) throw Error(ErrorCode::InvalidArgument, "missing field \"time\"");
    const json& t = body["time"];
    Timestamp at = 0;
    if (t.is_number_integer()) {
        at = t.get<Timestamp>();
    } else if (t.is_string()) {
        at = contracts::parse_time(t.get<std::string>(), contracts::DateBound::Start);
    } else {
        throw Error(ErrorCode::InvalidArgument, "\"time\" must be a time");
    }
    platform_->ledger().set_time(at);
    return json_response(200, {{"time", platform_->ledger().time()}});
}

HttpResponse Service::get_health() {
    const auto& l = platform_->ledger();
    return json_response(200, {{"status", "ok"},
                               {"height", l.height()},
                               {"time", l.time()},
                               {"state_root", "0x" + to_hex(l.state_root())},
                               {"demo_clock", config_.demo_clock}});
}

}  // namespace dvre::api
