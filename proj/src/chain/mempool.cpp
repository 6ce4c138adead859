#include "first/chain/mempool.hpp"

#include <algorithm>

namespace first {

std::string_view to_string(TxKind k) {
    switch (k) {
        case TxKind::Background: return "background";
        case TxKind::Victim: return "victim";
        case TxKind::Adversary: return "adversary";
    }
    return "?";
}

bool mines_before(const MempoolEntry& a, const MempoolEntry& b) {
    if (a.tip != b.tip) return a.tip > b.tip;
    if (a.submit_time != b.submit_time) return a.submit_time < b.submit_time;
    return a.hash < b.hash;
}

std::vector<MempoolEntry> mine_block(std::vector<MempoolEntry>& pool, std::uint64_t block_gas_limit,
                                     std::size_t block_qty) {
    std::stable_sort(pool.begin(), pool.end(), mines_before);
    std::uint64_t gas = 0;
    std::size_t take = 0;
    while (take < pool.size() && take < block_qty && gas + pool[take].gas <= block_gas_limit) gas += pool[take++].gas;
    std::vector<MempoolEntry> block(std::make_move_iterator(pool.begin()),
                                    std::make_move_iterator(pool.begin() + static_cast<std::ptrdiff_t>(take)));
    pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    return block;
}

}  // namespace first
