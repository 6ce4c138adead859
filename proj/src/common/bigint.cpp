#include "first/common/bigint.hpp"

#include <array>

#include "first/common/hash.hpp"

namespace first {

namespace {

constexpr std::array<unsigned, 55> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,  67,
    71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163,
    167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257};

}  // namespace

Bytes to_bytes(const mpz_class& n) {
    std::size_t count = (mpz_sizeinbase(n.get_mpz_t(), 2) + 7) / 8;
    if (n == 0) return {};
    Bytes out(count);
    std::size_t written = 0;
    mpz_export(out.data(), &written, 1, 1, 1, 0, n.get_mpz_t());
    out.resize(written);
    return out;
}

mpz_class from_bytes(ByteView bytes) {
    mpz_class n;
    if (!bytes.empty()) mpz_import(n.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return n;
}

mpz_class from_u64(std::uint64_t v) {
    mpz_class n;
    mpz_import(n.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
    return n;
}

std::optional<std::uint64_t> to_u64(const mpz_class& n) {
    if (n < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64) return std::nullopt;
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, 1, sizeof v, 0, 0, n.get_mpz_t());
    return v;
}

bool parse_integer(std::string_view text, mpz_class& out) {
    int base = 10;
    if (text.starts_with("0x") || text.starts_with("0X")) {
        text.remove_prefix(2);
        base = 16;
    }
    if (text.empty()) return false;
    std::string s(text);
    return mpz_set_str(out.get_mpz_t(), s.c_str(), base) == 0;
}

std::span<const unsigned> small_primes() { return kSmallPrimes; }

bool miller_rabin(const mpz_class& n, int rounds) {
    if (n < 2) return false;
    for (unsigned p : kSmallPrimes) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    // n - 1 = d * 2^s
    const mpz_class n_minus_1 = n - 1;
    mpz_class d = n_minus_1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

    ByteWriter w;
    w.field("first/miller-rabin/v1").field(to_bytes(n));
    Drbg witnesses(0, to_hex(sha256(w.bytes())));

    const mpz_class span = n - 3;  // witnesses in [2, n-2]
    const std::size_t nbytes = (mpz_sizeinbase(n.get_mpz_t(), 2) + 7) / 8 + 8;
    mpz_class a, x;
    for (int round = 0; round < rounds; ++round) {
        a = from_bytes(witnesses.bytes(nbytes));
        a = a % span + 2;
        mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n_minus_1) continue;
        bool composite = true;
        for (unsigned long r = 1; r < s; ++r) {
            mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
            if (x == n_minus_1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

mpz_class random_bits(Drbg& rng, unsigned bits) {
    if (bits == 0) return 0;
    auto raw = rng.bytes((bits + 7) / 8);
    mpz_class n = from_bytes(raw);
    // keep exactly `bits` bits, then force the top one
    mpz_fdiv_r_2exp(n.get_mpz_t(), n.get_mpz_t(), bits);
    mpz_setbit(n.get_mpz_t(), bits - 1);
    return n;
}

mpz_class random_prime(Drbg& rng, unsigned bits, int rounds) {
    for (;;) {
        mpz_class candidate = random_bits(rng, bits);
        if (bits > 1) mpz_setbit(candidate.get_mpz_t(), 0);
        if (miller_rabin(candidate, rounds)) return candidate;
    }
}

}  // namespace first
