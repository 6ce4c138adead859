#pragma once

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "first/protocol/messages.hpp"

namespace first {

/// Chain state visible to protocol actors: current height and the deployed
/// contracts. Height reads are lock-free so actors on other threads can
/// stamp block_curr.
class Chain {
public:
    std::uint64_t height() const { return height_.load(std::memory_order_acquire); }
    void set_height(std::uint64_t h) { height_.store(h, std::memory_order_release); }
    std::uint64_t advance() { return height_.fetch_add(1, std::memory_order_acq_rel) + 1; }

    void register_contract(const ContractDescriptor& c);
    std::optional<ContractDescriptor> find_contract(const std::string& address) const;
    std::size_t contract_count() const;

private:
    std::atomic<std::uint64_t> height_{0};
    mutable std::mutex mu_;
    std::map<std::string, ContractDescriptor> contracts_;
};

}  // namespace first
