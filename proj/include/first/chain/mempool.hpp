#pragma once

#include <optional>
#include <string>
#include <vector>

#include "first/common/hash.hpp"
#include "first/protocol/messages.hpp"

namespace first {

enum class TxKind { Background, Victim, Adversary };
std::string_view to_string(TxKind k);

struct MempoolEntry {
    std::string id;
    TxKind kind = TxKind::Background;
    std::optional<FirstTransaction> tx;  // empty for plain transfers
    std::uint64_t tip = 0;               // per gas, fee units
    double submit_time = 0;
    std::uint64_t gas = 21000;
    Digest hash{};
};

/// Miner ordering: tip descending, then earlier submit, then smaller hash.
bool mines_before(const MempoolEntry& a, const MempoolEntry& b);

/// Removes and returns the block's transactions in order. Filling stops at
/// the first transaction that does not fit the gas limit or once
/// `block_qty` transactions are taken; everything after stays pending.
std::vector<MempoolEntry> mine_block(std::vector<MempoolEntry>& pool, std::uint64_t block_gas_limit,
                                     std::size_t block_qty);

}  // namespace first
