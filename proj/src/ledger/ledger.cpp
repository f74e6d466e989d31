#include "dvre/ledger/ledger.hpp"

#include <algorithm>

#include "dvre/crypto/keccak.hpp"

namespace dvre::ledger {

const Contract* Ledger::View::find(const ContractId& id) const {
    auto it = contracts_.find(id);
    return it == contracts_.end() ? nullptr : it->second.contract.get();
}

// Pending effects of one transaction. Contracts touched by the transaction
// are cloned into `staged`, so a revert only has to drop this object.
struct Ledger::Scratch {
    const Ledger& ledger;
    Timestamp block_time;
    std::uint64_t block_height;
    ContractMap staged;
    std::vector<Event> events;
    ExecutionTrace trace;
    std::optional<ContractId> first_created;

    const Contract* find(const ContractId& id) const {
        if (auto it = staged.find(id); it != staged.end()) return it->second.contract.get();
        return ledger.view_.find(id);
    }

    Slot* mutable_slot(const ContractId& id) {
        if (auto it = staged.find(id); it != staged.end()) return &it->second;
        auto committed = ledger.contracts_.find(id);
        if (committed == ledger.contracts_.end()) return nullptr;
        auto [it, _] = staged.emplace(id, Slot{committed->second.contract->clone(), committed->second.creations});
        return &it->second;
    }

    std::uint64_t code_bytes(std::string_view kind) const {
        const auto& table = ledger.schedule_.code_bytes;
        auto it = table.find(kind);
        if (it != table.end()) return it->second;
        if (ledger.schedule_.mode == GasMode::Formula) {
            throw Revert{ErrorCode::UnknownFunction, "no code size for " + std::string(kind)};
        }
        return 0;
    }
};

class Ledger::Frame : public CallContext {
public:
    Frame(Scratch& scratch, const Address& sender, const ContractId& self)
        : scratch_(scratch), sender_(sender), self_(self) {}

    const Contract* find(const ContractId& id) const override { return scratch_.find(id); }
    const Address& sender() const override { return sender_; }
    const ContractId& self() const override { return self_; }
    Timestamp block_time() const override { return scratch_.block_time; }
    std::uint64_t block_height() const override { return scratch_.block_height; }

    void emit(std::string name, std::string message) override {
        scratch_.events.push_back(Event{self_, std::move(name), std::move(message)});
    }

    void charge_write(bool is_new, std::uint64_t slots) override {
        (is_new ? scratch_.trace.new_writes : scratch_.trace.update_writes) += slots;
    }

    ContractId create_child(std::string_view kind, const Bytes& ctor_args) override {
        Slot* parent = scratch_.mutable_slot(self_);
        const Constructor* ctor = scratch_.ledger.registry_.find(kind);
        if (parent == nullptr || ctor == nullptr) revert(ErrorCode::UnknownFunction, "cannot create " + std::string(kind));
        ContractId child_id = derive_contract_id(self_.address(), parent->creations++);
        return scratch_.ledger.construct(scratch_, *ctor, kind, self_.address(), child_id, ctor_args);
    }

private:
    Scratch& scratch_;
    Address sender_;
    ContractId self_;
};

ContractId Ledger::construct(Scratch& scratch, const Constructor& ctor, std::string_view kind, const Address& creator,
                             const ContractId& id, ByteView args) const {
    scratch.trace.creations += 1;
    scratch.trace.code_deposit_bytes += scratch.code_bytes(kind);
    Frame frame(scratch, creator, id);
    Decoder dec(args);
    auto contract = ctor(frame, dec);
    if (!dec.done()) throw Revert{ErrorCode::InvalidArgument, "trailing constructor arguments"};
    scratch.staged.insert_or_assign(id, Slot{std::move(contract), 0});
    if (!scratch.first_created) scratch.first_created = id;
    return id;
}

Ledger::Ledger(ContractRegistry registry, GasSchedule schedule, Timestamp genesis_time)
    : registry_(std::move(registry)), schedule_(std::move(schedule)), time_(genesis_time), head_time_(genesis_time) {}

ContractId Ledger::derive_contract_id(const Address& creator, std::uint64_t creation_index) {
    Encoder enc;
    enc.raw(creator.bytes()).u64(creation_index);
    Hash32 h = crypto::keccak256(enc.data());
    Address::Raw raw{};
    std::copy(h.begin() + 12, h.end(), raw.begin());
    return ContractId(Address(raw));
}

void Ledger::set_time(Timestamp t) {
    std::unique_lock lock(mu_);
    if (t < time_) {
        throw Error(ErrorCode::TimeRegression,
                    "cannot move clock from " + std::to_string(time_) + " back to " + std::to_string(t));
    }
    time_ = t;
}

void Ledger::set_clock(std::function<Timestamp()> source) {
    std::unique_lock lock(mu_);
    clock_ = std::move(source);
}

void Ledger::set_log_sink(std::function<void(const LogEntry&)> sink) {
    std::unique_lock lock(mu_);
    sink_ = std::move(sink);
}

Timestamp Ledger::next_block_time_locked(std::optional<Timestamp> now) const {
    if (now) {
        if (*now < time_) {
            throw Error(ErrorCode::TimeRegression,
                        "block time " + std::to_string(*now) + " precedes ledger time " + std::to_string(time_));
        }
        return *now;
    }
    if (clock_) return std::max(time_, clock_());
    return time_;
}

Receipt Ledger::submit_tx(const Transaction& tx, std::optional<Timestamp> now) {
    std::unique_lock lock(mu_);

    auto nonce_it = nonces_.find(tx.sender);
    std::uint64_t expected = nonce_it == nonces_.end() ? 0 : nonce_it->second;
    if (tx.nonce != expected) {
        throw Error(ErrorCode::BadNonce,
                    "nonce " + std::to_string(tx.nonce) + " but sender expects " + std::to_string(expected));
    }

    std::string kind;
    if (tx.kind == TxKind::DeployContract) {
        if (tx.target) throw Error(ErrorCode::InvalidArgument, "deployment must not name a target");
        if (registry_.find(tx.function_name) == nullptr) {
            throw Error(ErrorCode::UnknownFunction, "unknown contract kind " + tx.function_name);
        }
        if (schedule_.mode == GasMode::Formula && !schedule_.code_bytes.contains(tx.function_name)) {
            throw Error(ErrorCode::UnknownFunction, "gas schedule has no code size for " + tx.function_name);
        }
        kind = tx.function_name;
    } else {
        if (!tx.target) throw Error(ErrorCode::InvalidArgument, "call requires a target contract");
        const Contract* target = view_.find(*tx.target);
        if (target == nullptr) throw Error(ErrorCode::UnknownContract, "no contract at " + tx.target->str());
        if (!target->has_function(tx.function_name)) {
            throw Error(ErrorCode::UnknownFunction,
                        std::string(target->kind()) + " has no function " + tx.function_name);
        }
        kind = target->kind();
    }
    // Admission-time probe: a schedule without an entry rejects the tx.
    gas_of(tx, kind, schedule_, {});

    Timestamp block_time = next_block_time_locked(now);
    return apply_locked(tx, kind, block_time);
}

Receipt Ledger::apply_locked(const Transaction& tx, const std::string& kind, Timestamp block_time) {
    Scratch scratch{*this, block_time, height_ + 1, {}, {}, {}, {}};
    Receipt receipt;
    receipt.tx_hash = tx.hash();
    receipt.block_height = height_ + 1;
    receipt.block_time = block_time;

    try {
        if (tx.kind == TxKind::DeployContract) {
            auto id = derive_contract_id(tx.sender, tx.nonce);
            construct(scratch, *registry_.find(kind), kind, tx.sender, id, tx.payload);
        } else {
            Slot* slot = scratch.mutable_slot(*tx.target);
            Frame frame(scratch, tx.sender, *tx.target);
            Decoder args(tx.payload);
            receipt.output = slot->contract->call(frame, tx.function_name, args);
            if (!args.done()) throw Revert{ErrorCode::InvalidArgument, "trailing call arguments"};
        }
        receipt.status = TxStatus::Success;
        receipt.events = std::move(scratch.events);
        receipt.created = scratch.first_created;
    } catch (const Revert& r) {
        receipt.status = TxStatus::Reverted;
        receipt.revert_code = r.code;
        receipt.revert_reason = r.reason;
    } catch (const Error& e) {
        // Malformed arguments surface as decoder errors.
        receipt.status = TxStatus::Reverted;
        receipt.revert_code = e.code();
        receipt.revert_reason = e.what();
    }

    if (receipt.ok()) {
        receipt.gas_used = gas_of(tx, kind, schedule_, scratch.trace);
        for (auto& [id, slot] : scratch.staged) contracts_.insert_or_assign(id, std::move(slot));
    } else {
        receipt.output.clear();
        receipt.gas_used = gas_of(tx, kind, schedule_, {});
    }

    nonces_[tx.sender] = tx.nonce + 1;
    height_ += 1;
    time_ = block_time;
    head_time_ = block_time;
    receipts_.push_back(receipt);
    log_.push_back(LogEntry{tx, block_time, receipt.digest()});
    if (sink_) sink_(log_.back());
    return receipt;
}

Timestamp Ledger::time() const {
    std::shared_lock lock(mu_);
    return next_block_time_locked(std::nullopt);
}

std::uint64_t Ledger::height() const {
    std::shared_lock lock(mu_);
    return height_;
}

std::uint64_t Ledger::nonce(const Address& sender) const {
    std::shared_lock lock(mu_);
    auto it = nonces_.find(sender);
    return it == nonces_.end() ? 0 : it->second;
}

std::vector<LogEntry> Ledger::log() const {
    std::shared_lock lock(mu_);
    return log_;
}

std::vector<Receipt> Ledger::receipts() const {
    std::shared_lock lock(mu_);
    return receipts_;
}

std::vector<Event> Ledger::events() const {
    std::shared_lock lock(mu_);
    std::vector<Event> out;
    for (const auto& r : receipts_) out.insert(out.end(), r.events.begin(), r.events.end());
    return out;
}

Bytes Ledger::serialize_state() const {
    std::shared_lock lock(mu_);
    Encoder enc;
    enc.u64(height_).i64(head_time_);
    enc.u32(static_cast<std::uint32_t>(nonces_.size()));
    for (const auto& [addr, n] : nonces_) {
        encode_address(enc, addr);
        enc.u64(n);
    }
    encode_contracts_locked(enc);
    return std::move(enc).take();
}

void Ledger::encode_contracts_locked(Encoder& enc) const {
    enc.u32(static_cast<std::uint32_t>(contracts_.size()));
    for (const auto& [id, slot] : contracts_) {
        encode_contract_id(enc, id);
        enc.str(slot.contract->kind()).u64(slot.creations);
        Encoder state;
        slot.contract->encode_state(state);
        enc.bytes(state.data());
    }
}

Hash32 Ledger::contracts_root() const {
    std::shared_lock lock(mu_);
    Encoder enc;
    encode_contracts_locked(enc);
    return crypto::keccak256(enc.data());
}

Hash32 Ledger::state_root() const {
    return crypto::keccak256(serialize_state());
}

std::unique_ptr<Ledger> Ledger::replay(std::span<const LogEntry> log, ContractRegistry registry, GasSchedule schedule,
                                       Timestamp genesis_time) {
    auto ledger = std::make_unique<Ledger>(std::move(registry), std::move(schedule), genesis_time);
    for (std::size_t i = 0; i < log.size(); ++i) {
        Receipt receipt;
        try {
            receipt = ledger->submit_tx(log[i].tx, log[i].block_time);
        } catch (const Error& e) {
            throw Error(ErrorCode::CorruptLog, "log entry " + std::to_string(i) + " rejected: " + e.what());
        }
        if (receipt.digest() != log[i].receipt_digest) {
            throw Error(ErrorCode::CorruptLog, "log entry " + std::to_string(i) + " receipt digest mismatch");
        }
    }
    return ledger;
}

}  // namespace dvre::ledger
