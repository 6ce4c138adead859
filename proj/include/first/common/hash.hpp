#pragma once

#include <array>
#include <cstdint>

#include "first/common/bytes.hpp"

namespace first {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);

}  // namespace first
