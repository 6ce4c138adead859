#include "first/chain/ledger.hpp"

#include "first/common/error.hpp"

namespace first {

void Chain::register_contract(const ContractDescriptor& c) {
    std::lock_guard lock(mu_);
    if (!contracts_.emplace(c.address, c).second)
        throw Error("ContractExists", "a contract is already deployed at " + c.address);
}

std::optional<ContractDescriptor> Chain::find_contract(const std::string& address) const {
    std::lock_guard lock(mu_);
    auto it = contracts_.find(address);
    if (it == contracts_.end()) return std::nullopt;
    return it->second;
}

std::size_t Chain::contract_count() const {
    std::lock_guard lock(mu_);
    return contracts_.size();
}

}  // namespace first
