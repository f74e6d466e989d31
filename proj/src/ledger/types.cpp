#include "dvre/ledger/types.hpp"

#include <charconv>

#include "dvre/crypto/keccak.hpp"

namespace dvre::ledger {

void encode_address(Encoder& enc, const Address& a) {
    enc.raw(a.bytes());
}

Address decode_address(Decoder& dec) {
    return Address(dec.fixed<Address::kSize>());
}

void encode_contract_id(Encoder& enc, const ContractId& id) {
    encode_address(enc, id.address());
}

ContractId decode_contract_id(Decoder& dec) {
    return ContractId(decode_address(dec));
}

Bytes Transaction::encode() const {
    Encoder enc;
    encode_address(enc, sender);
    enc.u8(static_cast<std::uint8_t>(kind));
    enc.boolean(target.has_value());
    if (target) encode_contract_id(enc, *target);
    enc.str(function_name).bytes(payload).u64(nonce);
    return std::move(enc).take();
}

Transaction Transaction::decode(ByteView data) {
    Decoder dec(data);
    Transaction tx;
    tx.sender = decode_address(dec);
    auto kind = dec.u8();
    if (kind > 1) throw Error(ErrorCode::InvalidArgument, "unknown transaction kind");
    tx.kind = static_cast<TxKind>(kind);
    if (dec.boolean()) tx.target = decode_contract_id(dec);
    tx.function_name = dec.str();
    tx.payload = dec.bytes();
    tx.nonce = dec.u64();
    dec.expect_done();
    return tx;
}

Hash32 Transaction::hash() const {
    return crypto::keccak256(encode());
}

Bytes Receipt::encode() const {
    Encoder enc;
    enc.raw(tx_hash).u8(static_cast<std::uint8_t>(status)).u64(gas_used);
    enc.u32(static_cast<std::uint32_t>(events.size()));
    for (const auto& ev : events) {
        encode_contract_id(enc, ev.contract);
        enc.str(ev.name).str(ev.message);
    }
    enc.u64(block_height).i64(block_time);
    enc.u32(status == TxStatus::Reverted ? static_cast<std::uint32_t>(revert_code) : 0).str(revert_reason);
    enc.boolean(created.has_value());
    if (created) encode_contract_id(enc, *created);
    enc.bytes(output);
    return std::move(enc).take();
}

Hash32 Receipt::digest() const {
    return crypto::keccak256(encode());
}

std::string format_log_line(const LogEntry& entry) {
    return to_hex(entry.tx.encode()) + '\t' + std::to_string(entry.block_time) + '\t' + to_hex(entry.receipt_digest);
}

LogEntry parse_log_line(std::string_view line) {
    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) throw Error(ErrorCode::CorruptLog, "log line must have three fields");
    try {
        LogEntry entry;
        entry.tx = Transaction::decode(from_hex(line.substr(0, tab1)));
        auto time_field = line.substr(tab1 + 1, tab2 - tab1 - 1);
        auto [ptr, ec] = std::from_chars(time_field.data(), time_field.data() + time_field.size(), entry.block_time);
        if (ec != std::errc{} || ptr != time_field.data() + time_field.size()) {
            throw Error(ErrorCode::CorruptLog, "bad block time");
        }
        entry.receipt_digest = fixed_from_hex<32>(line.substr(tab2 + 1));
        return entry;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptLog) throw;
        throw Error(ErrorCode::CorruptLog, std::string("malformed log line: ") + e.what());
    }
}

}  // namespace dvre::ledger
