#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include "first/common/bytes.hpp"
#include "first/common/hash.hpp"

namespace first {

/// Deterministic random byte generator: SHA-256 in counter mode over a
/// (seed, label) key. Every random choice in the library flows from one of
/// these, so a run is fully reproducible from its seed. Labels give each
/// actor an independent stream, which keeps draws independent of message
/// scheduling.
class Drbg {
public:
    using result_type = std::uint64_t;

    Drbg(std::uint64_t seed, std::string_view label);

    /// Independent child stream.
    Drbg fork(std::string_view label) const;

    void fill(std::span<std::uint8_t> out);
    Bytes bytes(std::size_t n);
    std::uint64_t next_u64();

    /// Uniform integer in [0, bound).
    std::uint64_t uniform(std::uint64_t bound);

    result_type operator()() { return next_u64(); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

private:
    explicit Drbg(const Digest& key) : key_(key) {}
    void refill();

    Digest key_{};
    Digest block_{};
    std::uint64_t counter_ = 0;
    std::size_t used_ = sizeof(Digest);
};

}  // namespace first
