#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "first/common/bytes.hpp"
#include "first/common/drbg.hpp"

namespace first {

/// Minimal big-endian magnitude; zero encodes as the empty string.
Bytes to_bytes(const mpz_class& n);
mpz_class from_bytes(ByteView bytes);

mpz_class from_u64(std::uint64_t v);
/// nullopt when n is negative or needs more than 64 bits.
std::optional<std::uint64_t> to_u64(const mpz_class& n);

/// Parses decimal, or hex with a 0x prefix. Returns false on junk.
bool parse_integer(std::string_view text, mpz_class& out);

/// The 55 primes up to 257, used as a trial-division sieve.
std::span<const unsigned> small_primes();

/// Miller-Rabin with `rounds` witnesses. Witnesses are derived from a hash
/// of n so the answer is a deterministic function of (n, rounds).
bool miller_rabin(const mpz_class& n, int rounds = 64);

/// Uniform integer with exactly `bits` bits (top bit set).
mpz_class random_bits(Drbg& rng, unsigned bits);

/// Uniform prime with exactly `bits` bits, by rejection sampling.
mpz_class random_prime(Drbg& rng, unsigned bits, int rounds = 64);

}  // namespace first
