#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "first/aggsig.hpp"
#include "first/common/bytes.hpp"
#include "first/common/hash.hpp"
#include "first/vdf.hpp"

namespace first {

// Canonical encodings. Every message starts with a kind tag and then its
// fields in fixed order, each as a u32 length plus bytes; integers are
// big-endian. Hashes and signatures are always taken over these bytes.

/// M_A = (addr_A, f_name, addr_SC). Stays with the user until the final
/// transaction reveals it.
struct TxDetails {
    std::string user_addr;
    std::string function_name;
    std::string contract_addr;

    Bytes encode() const;
    Digest digest() const { return sha256(encode()); }
    static std::optional<TxDetails> decode(ByteView in);
    friend bool operator==(const TxDetails&, const TxDetails&) = default;
};

/// M_i = (ell, h, V_i, block_curr)
struct ChallengeMessage {
    mpz_class ell;
    Digest digest_h{};
    std::uint32_t verifier_id = 0;
    std::uint64_t block_curr = 0;

    Bytes encode() const;
    static std::optional<ChallengeMessage> decode(ByteView in);
    friend bool operator==(const ChallengeMessage&, const ChallengeMessage&) = default;
};

/// M'_i = ("accept", V_i, ell)
struct AcceptMessage {
    std::uint32_t verifier_id = 0;
    mpz_class ell;

    Bytes encode() const;
    static std::optional<AcceptMessage> decode(ByteView in);
    friend bool operator==(const AcceptMessage&, const AcceptMessage&) = default;
};

/// pp = (epoch, N, T); what every verifier signs after parameter generation.
struct PublicParams {
    std::uint64_t epoch_id = 0;
    VdfParams vdf;

    Bytes encode() const;
    friend bool operator==(const PublicParams&, const PublicParams&) = default;
};

Bytes encode_bundle(const SignedBundle& b);
std::optional<SignedBundle> decode_bundle(ByteView in);

Bytes encode_proof(const VdfProof& p);
std::optional<VdfProof> decode_proof(ByteView in);

enum class ChallengeState { Issued, Evaluated, Consumed };

struct ChallengeRecord {
    mpz_class ell;
    Digest digest_h{};
    std::uint64_t block_at_issue = 0;
    ChallengeState state = ChallengeState::Issued;

    /// Moves forward only; returns false on an attempted backwards step.
    bool advance(ChallengeState next);
};

struct UserTxIntent {
    TxDetails details;
    Digest digest_h{};
    Signature user_sig;
    KeyPair user_keypair;
};

/// tx_A = (sigma'_A, M', pk_A) with M' = (M_A, M_agg, M'_agg).
struct FirstTransaction {
    Signature user_sig_prime;
    TxDetails details;
    SignedBundle m_agg;
    SignedBundle m_agg_prime;
    PublicKey user_pk;
    std::uint32_t declared_tip_pct = 0;

    /// The bytes sigma'_A signs.
    Bytes payload_m_prime() const;
    Bytes encode() const;
    static std::optional<FirstTransaction> decode(ByteView in);
    Digest hash() const { return sha256(encode()); }
    friend bool operator==(const FirstTransaction&, const FirstTransaction&) = default;
};

struct ContractDescriptor {
    std::string address;
    std::vector<PublicKey> verifier_keys;  // indexed by verifier id
    std::uint64_t freshness_threshold = 0;

    std::size_t verifier_count() const { return verifier_keys.size(); }
};

struct EpochConfig {
    std::uint64_t epoch_id = 0;
    std::uint64_t difficulty_T = 0;
    mpz_class modulus_N;
    double recommended_tip_pct = 0;
    std::uint64_t freshness_threshold = 0;
    double t1_seconds = 0;
    double t2_seconds = 0;
    std::uint32_t verifier_count = 0;
};

/// Throws InvalidEpoch unless t1 > t2, or EvenVerifierCount.
void validate_epoch(const EpochConfig& e);

}  // namespace first
