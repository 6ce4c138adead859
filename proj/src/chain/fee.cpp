#include "first/chain/fee.hpp"

#include <limits>

#include "first/common/error.hpp"

namespace first {

std::uint64_t base_fee_update(std::uint64_t parent, std::uint64_t used, std::uint64_t target) {
    if (target == 0) throw Error("ConfigInvalid", "gas target must be positive");
    using u128 = unsigned __int128;
    u128 next;
    if (used >= target) {
        u128 delta = u128(parent) * (used - target) / target / 8;
        next = u128(parent) + delta;
        const u128 cap = std::numeric_limits<std::uint64_t>::max();
        if (next > cap) next = cap;
    } else {
        u128 delta = u128(parent) * (target - used) / target / 8;
        next = delta >= parent ? 0 : u128(parent) - delta;
    }
    return next < 1 ? 1 : static_cast<std::uint64_t>(next);
}

}  // namespace first
