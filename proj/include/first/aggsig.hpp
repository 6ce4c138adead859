#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "first/common/bytes.hpp"
#include "first/common/drbg.hpp"
#include "first/common/error.hpp"

namespace first {

// BLS aggregate signatures on BLS12-381: signatures in G1, keys in G2.
// Values are held in their compressed encodings; points are decoded and
// subgroup-checked whenever they are used.

inline constexpr std::string_view kAggsigDst = "FIRST-AGGSIG-v1";

struct SecretKey {
    std::array<std::uint8_t, 32> bytes{};  // big-endian scalar
    friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

struct PublicKey {
    std::array<std::uint8_t, 96> bytes{};
    friend auto operator<=>(const PublicKey&, const PublicKey&) = default;

    static std::optional<PublicKey> from_bytes(ByteView in);
    /// Decodes to a point of G2 other than the identity.
    bool valid() const;
};

struct Signature {
    std::array<std::uint8_t, 48> bytes{};
    friend auto operator<=>(const Signature&, const Signature&) = default;

    static std::optional<Signature> from_bytes(ByteView in);
    /// Decodes to a point of G1 other than the identity.
    bool valid() const;
};

struct KeyPair {
    SecretKey secret_x;
    PublicKey public_v;
};

/// M_1..M_n, pk_1..pk_n and their aggregate. `public_keys` is empty until
/// the coordinator attaches the signers' keys.
struct SignedBundle {
    Signature agg_sigma;
    std::vector<Bytes> messages;
    std::vector<PublicKey> public_keys;

    friend bool operator==(const SignedBundle&, const SignedBundle&) = default;
};

/// Deterministic in the seed.
KeyPair keygen(ByteView seed);
KeyPair keygen(Drbg& rng);

Signature sign(const KeyPair& kp, ByteView message);

/// e(sigma, g2) == e(H(m), v). Malformed or identity points give false.
bool verify(const PublicKey& pk, ByteView message, const Signature& sig);
bool verify(ByteView pk, ByteView message, ByteView sig);

/// Product of the signatures in G1. Throws LengthMismatch or Empty.
SignedBundle aggregate(std::span<const Bytes> messages, std::span<const Signature> signatures);

/// False on any repeated message or key-count mismatch; otherwise the
/// product-of-pairings equation.
bool aggregate_verify(const SignedBundle& bundle);

}  // namespace first
