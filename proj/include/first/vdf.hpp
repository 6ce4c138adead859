#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "first/common/bytes.hpp"
#include "first/common/error.hpp"

namespace first {

// Wesolowski VDF over Z_N^*: y = x^(2^T) mod N with a one-element proof.

inline constexpr unsigned kFsPrimeBits = 128;

struct VdfParams {
    mpz_class modulus_N;
    std::uint64_t difficulty_T = 0;
    unsigned security_k = 0;

    friend bool operator==(const VdfParams&, const VdfParams&) = default;
};

struct VdfProof {
    mpz_class input_x;
    mpz_class output_y;
    mpz_class proof_pi;
    mpz_class fs_challenge_prime;

    friend bool operator==(const VdfProof&, const VdfProof&) = default;
};

/// Throws Error with reason EvenModulus, TinyModulus or DifficultyOverflow.
VdfParams vdf_setup(unsigned security_k, const mpz_class& difficulty_T, const mpz_class& modulus_N);

/// T sequential squarings plus the streamed proof. Throws InputOutOfRange
/// unless 1 < x < N and x passes the small-factor screen.
VdfProof vdf_eval(const VdfParams& params, const mpz_class& x);

/// Never throws; malformed proofs are rejected.
bool vdf_verify(const VdfParams& params, const VdfProof& proof);

/// Odd prime of exactly `bits` bits derived from `data` by counter hashing.
mpz_class hash_to_prime(ByteView data, unsigned bits = kFsPrimeBits);

/// Fiat-Shamir input: canonical encoding of (x, y, T, N).
Bytes vdf_fs_transcript(const VdfParams& params, const mpz_class& x, const mpz_class& y);

/// v in [1, N-1] and shares no prime factor <= 257 with N.
bool vdf_element_ok(const VdfParams& params, const mpz_class& v);

}  // namespace first
