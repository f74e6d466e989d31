#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "dvre/common/encoding.hpp"
#include "dvre/ledger/types.hpp"

namespace dvre::ledger {

class CallContext;

/// A contract state machine hosted by the ledger. Instances are mutated only
/// through call() inside transaction application.
class Contract {
public:
    virtual ~Contract() = default;

    virtual std::string_view kind() const = 0;
    virtual bool has_function(std::string_view name) const = 0;
    /// Executes `function`; reverts by throwing Revert (usually via
    /// CallContext::revert). The returned bytes become Receipt::output.
    virtual Bytes call(CallContext& ctx, std::string_view function, Decoder& args) = 0;
    virtual void encode_state(Encoder& enc) const = 0;
    virtual std::unique_ptr<Contract> clone() const = 0;
};

/// Thrown from contract code to abort a transaction. State changes made by
/// the transaction are discarded; the receipt records code and reason.
struct Revert {
    ErrorCode code;
    std::string reason;
};

/// Runs a constructor inside a deployment or a factory call.
using Constructor = std::function<std::unique_ptr<Contract>(CallContext& ctx, Decoder& args)>;

class ContractRegistry {
public:
    void add(std::string kind, Constructor ctor) { ctors_[std::move(kind)] = std::move(ctor); }
    const Constructor* find(std::string_view kind) const {
        auto it = ctors_.find(kind);
        return it == ctors_.end() ? nullptr : &it->second;
    }

private:
    std::map<std::string, Constructor, std::less<>> ctors_;
};

/// Read access to committed contract state.
class StateView {
public:
    virtual ~StateView() = default;
    virtual const Contract* find(const ContractId& id) const = 0;

    template <class T>
    const T* find_as(const ContractId& id) const {
        return dynamic_cast<const T*>(find(id));
    }
};

/// Execution environment of one contract frame.
class CallContext : public StateView {
public:
    virtual const Address& sender() const = 0;
    virtual const ContractId& self() const = 0;
    virtual Timestamp block_time() const = 0;
    virtual std::uint64_t block_height() const = 0;

    virtual void emit(std::string name, std::string message) = 0;
    /// Records `slots` storage writes for gas metering.
    virtual void charge_write(bool is_new, std::uint64_t slots = 1) = 0;
    /// Deploys a child contract from the current frame and returns its id.
    virtual ContractId create_child(std::string_view kind, const Bytes& ctor_args) = 0;

    [[noreturn]] void revert(ErrorCode code, std::string reason) const { throw Revert{code, std::move(reason)}; }
    void require(bool cond, ErrorCode code, std::string reason) const {
        if (!cond) revert(code, std::move(reason));
    }
};

/// Storage slots a string occupies: one word for short strings, otherwise a
/// length word plus the data words.
inline std::uint64_t string_slots(std::string_view s) {
    return s.size() < 32 ? 1 : 1 + (s.size() + 31) / 32;
}

}  // namespace dvre::ledger
