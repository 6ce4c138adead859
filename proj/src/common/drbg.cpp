#include "first/common/drbg.hpp"

#include <cstring>

namespace first {

Drbg::Drbg(std::uint64_t seed, std::string_view label) {
    ByteWriter w;
    w.field("first/drbg/v1").u64(seed).field(label);
    key_ = sha256(w.bytes());
}

Drbg Drbg::fork(std::string_view label) const {
    ByteWriter w;
    w.field(key_).field(label);
    return Drbg(sha256(w.bytes()));
}

void Drbg::refill() {
    std::uint8_t buf[sizeof(Digest) + 8];
    std::memcpy(buf, key_.data(), key_.size());
    for (int i = 0; i < 8; ++i) buf[key_.size() + i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
    ++counter_;
    block_ = sha256(ByteView(buf, sizeof(buf)));
    used_ = 0;
}

void Drbg::fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
        if (used_ == block_.size()) refill();
        b = block_[used_++];
    }
}

Bytes Drbg::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

std::uint64_t Drbg::next_u64() {
    std::uint8_t buf[8];
    fill(buf);
    std::uint64_t v = 0;
    for (auto b : buf) v = (v << 8) | b;
    return v;
}

std::uint64_t Drbg::uniform(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = max() - (max() % bound);
    for (;;) {
        auto v = next_u64();
        if (v < limit) return v % bound;
    }
}

}  // namespace first
