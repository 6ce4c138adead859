#include "first/common/hash.hpp"

#include <blst.h>
#include <blst_aux.h>

namespace first {

Digest sha256(ByteView data) {
    Digest out{};
    blst_sha256(out.data(), data.data(), data.size());
    return out;
}

}  // namespace first
