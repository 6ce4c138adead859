#pragma once

#include <cstdint>

namespace first {

/// EIP-1559 base fee for the child block:
/// parent + parent * (used - target) / target / 8, never below 1.
std::uint64_t base_fee_update(std::uint64_t parent_base_fee, std::uint64_t parent_gas_used, std::uint64_t gas_target);

}  // namespace first
