#include "first/common/bytes.hpp"

namespace first {

std::string to_hex(ByteView bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::optional<Bytes> from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void ByteWriter::raw_u32(std::uint32_t value) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(value >> shift));
}

ByteWriter& ByteWriter::field(ByteView value) {
    raw_u32(static_cast<std::uint32_t>(value.size()));
    out_.insert(out_.end(), value.begin(), value.end());
    return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t value) {
    std::uint8_t buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<std::uint8_t>(value >> (24 - 8 * i));
    return field(ByteView(buf, 4));
}

ByteWriter& ByteWriter::u64(std::uint64_t value) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(value >> (56 - 8 * i));
    return field(ByteView(buf, 8));
}

std::optional<ByteView> ByteReader::field() {
    if (in_.size() - pos_ < 4) return std::nullopt;
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = (len << 8) | in_[pos_ + i];
    pos_ += 4;
    if (in_.size() - pos_ < len) return std::nullopt;
    auto out = in_.subspan(pos_, len);
    pos_ += len;
    return out;
}

std::optional<std::string> ByteReader::string_field() {
    auto f = field();
    if (!f) return std::nullopt;
    return std::string(f->begin(), f->end());
}

std::optional<std::uint32_t> ByteReader::u32() {
    auto f = field();
    if (!f || f->size() != 4) return std::nullopt;
    std::uint32_t v = 0;
    for (auto b : *f) v = (v << 8) | b;
    return v;
}

std::optional<std::uint64_t> ByteReader::u64() {
    auto f = field();
    if (!f || f->size() != 8) return std::nullopt;
    std::uint64_t v = 0;
    for (auto b : *f) v = (v << 8) | b;
    return v;
}

}  // namespace first
