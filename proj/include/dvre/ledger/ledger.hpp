#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "dvre/ledger/contract.hpp"
#include "dvre/ledger/gas.hpp"
#include "dvre/ledger/types.hpp"

namespace dvre::ledger {

/// Single-sequencer ledger: one transaction per block, totally ordered.
///
/// Transactions that fail admission (BadNonce, UnknownContract,
/// UnknownFunction, TimeRegression) throw and leave no trace. Admitted
/// transactions always produce a receipt and a log entry; a reverted one
/// consumes its nonce and gas but leaves contract state untouched.
///
/// Thread-safety: submit_tx and set_time serialize on an exclusive lock;
/// const members take a shared lock and only see committed state.
class Ledger {
public:
    Ledger(ContractRegistry registry, GasSchedule schedule, Timestamp genesis_time = 0);

    Ledger(const Ledger&) = delete;
    Ledger& operator=(const Ledger&) = delete;

    /// `now`, when given, becomes the block time and must not precede the
    /// current ledger time.
    Receipt submit_tx(const Transaction& tx, std::optional<Timestamp> now = std::nullopt);

    /// Throws Error(TimeRegression) if t precedes the current time.
    void set_time(Timestamp t);

    /// When set, each block is stamped max(ledger time, source()).
    void set_clock(std::function<Timestamp()> source);

    /// Called with every committed log entry, under the ledger lock.
    void set_log_sink(std::function<void(const LogEntry&)> sink);

    /// Current ledger time: the later of the last block or set_time, and the
    /// clock source when one is set.
    Timestamp time() const;
    std::uint64_t height() const;
    std::uint64_t nonce(const Address& sender) const;
    const GasSchedule& schedule() const { return schedule_; }

    std::vector<LogEntry> log() const;
    std::vector<Receipt> receipts() const;
    std::vector<Event> events() const;

    /// Canonical encoding of height, last block time, nonces and every contract's state.
    Bytes serialize_state() const;
    Hash32 state_root() const;
    /// Keccak-256 over contract state alone; unaffected by nonces, height
    /// and block time, so a reverted transaction leaves it unchanged.
    Hash32 contracts_root() const;

    /// Runs `fn(const StateView&)` under the shared lock.
    template <class F>
    auto read(F&& fn) const {
        std::shared_lock lock(mu_);
        return fn(static_cast<const StateView&>(view_));
    }

    /// Re-executes `log` on a fresh ledger. Any nonce, ordering, clock or
    /// receipt-digest inconsistency throws Error(CorruptLog).
    static std::unique_ptr<Ledger> replay(std::span<const LogEntry> log, ContractRegistry registry,
                                          GasSchedule schedule, Timestamp genesis_time = 0);

    /// Deterministic id of a contract created by `creator` (an account or a
    /// contract) as its `creation_index`-th creation.
    static ContractId derive_contract_id(const Address& creator, std::uint64_t creation_index);

private:
    struct Slot {
        std::unique_ptr<Contract> contract;
        std::uint64_t creations = 0;
    };
    using ContractMap = std::map<ContractId, Slot>;

    class View : public StateView {
    public:
        explicit View(const ContractMap& contracts) : contracts_(contracts) {}
        const Contract* find(const ContractId& id) const override;

    private:
        const ContractMap& contracts_;
    };

    class Frame;
    struct Scratch;

    Receipt apply_locked(const Transaction& tx, const std::string& kind, Timestamp block_time);
    ContractId construct(Scratch& scratch, const Constructor& ctor, std::string_view kind, const Address& creator,
                         const ContractId& id, ByteView args) const;
    void encode_contracts_locked(Encoder& enc) const;
    Timestamp next_block_time_locked(std::optional<Timestamp> now) const;

    ContractRegistry registry_;
    GasSchedule schedule_;
    mutable std::shared_mutex mu_;

    ContractMap contracts_;
    View view_{contracts_};
    std::map<Address, std::uint64_t> nonces_;
    std::uint64_t height_ = 0;
    Timestamp time_ = 0;
    // Block time of the last committed transaction; set_time does not move it.
    Timestamp head_time_ = 0;
    std::vector<Receipt> receipts_;
    std::vector<LogEntry> log_;
    std::function<Timestamp()> clock_;
    std::function<void(const LogEntry&)> sink_;
};

}  // namespace dvre::ledger
