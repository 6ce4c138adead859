#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace first {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);
std::optional<Bytes> from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Canonical encoder: every field is a u32 big-endian length followed by its
/// bytes; integers are big-endian. Field order is fixed by the caller.
class ByteWriter {
public:
    ByteWriter& field(ByteView value);
    ByteWriter& field(std::string_view value) { return field(as_bytes(value)); }
    ByteWriter& u32(std::uint32_t value);
    ByteWriter& u64(std::uint64_t value);

    const Bytes& bytes() const& { return out_; }
    Bytes take() && { return std::move(out_); }

private:
    void raw_u32(std::uint32_t value);
    Bytes out_;
};

/// Decoder for ByteWriter output. Every read returns nullopt on truncation;
/// `done()` tells whether the whole input was consumed.
class ByteReader {
public:
    explicit ByteReader(ByteView in) : in_(in) {}

    std::optional<ByteView> field();
    std::optional<std::string> string_field();
    std::optional<std::uint32_t> u32();
    std::optional<std::uint64_t> u64();
    bool done() const { return pos_ == in_.size(); }

private:
    ByteView in_;
    std::size_t pos_ = 0;
};

}  // namespace first
