#include "first/vdf.hpp"

#include "first/common/bigint.hpp"
#include "first/common/hash.hpp"

namespace first {

VdfParams vdf_setup(unsigned security_k, const mpz_class& difficulty_T, const mpz_class& modulus_N) {
    if (modulus_N <= 3) throw Error("TinyModulus", "modulus must exceed 3, got " + modulus_N.get_str());
    if (mpz_even_p(modulus_N.get_mpz_t())) throw Error("EvenModulus", "modulus must be odd, got " + modulus_N.get_str());
    auto t = to_u64(difficulty_T);
    if (!t) throw Error("DifficultyOverflow", "difficulty must lie in [0, 2^64), got " + difficulty_T.get_str());
    VdfParams p;
    p.modulus_N = modulus_N;
    p.difficulty_T = *t;
    p.security_k = security_k;
    return p;
}

bool vdf_element_ok(const VdfParams& params, const mpz_class& v) {
    const mpz_class& n = params.modulus_N;
    if (v < 1 || v >= n) return false;
    for (unsigned p : small_primes()) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p) && mpz_divisible_ui_p(v.get_mpz_t(), p)) return false;
    }
    return true;
}

Bytes vdf_fs_transcript(const VdfParams& params, const mpz_class& x, const mpz_class& y) {
    ByteWriter w;
    w.field("first/vdf/fs/v1")
        .field(to_bytes(x))
        .field(to_bytes(y))
        .u64(params.difficulty_T)
        .field(to_bytes(params.modulus_N));
    return std::move(w).take();
}

mpz_class hash_to_prime(ByteView data, unsigned bits) {
    const Digest seed = sha256(data);
    const std::size_t nbytes = (bits + 7) / 8;
    for (std::uint64_t counter = 0;; ++counter) {
        Bytes stream;
        for (std::uint32_t block = 0; stream.size() < nbytes; ++block) {
            ByteWriter w;
            w.field("first/hash-to-prime/v1").field(seed).u64(counter).u32(block);
            Digest d = sha256(w.bytes());
            stream.insert(stream.end(), d.begin(), d.end());
        }
        stream.resize(nbytes);
        mpz_class c = from_bytes(stream);
        mpz_fdiv_r_2exp(c.get_mpz_t(), c.get_mpz_t(), bits);
        mpz_setbit(c.get_mpz_t(), bits - 1);
        mpz_setbit(c.get_mpz_t(), 0);
        if (miller_rabin(c, 64)) return c;
    }
}

VdfProof vdf_eval(const VdfParams& params, const mpz_class& x) {
    const mpz_class& n = params.modulus_N;
    if (x <= 1 || x >= n || !vdf_element_ok(params, x))
        throw Error("InputOutOfRange", "VDF input must satisfy 1 < x < N");

    VdfProof out;
    out.input_x = x;
    mpz_class y = x;
    for (std::uint64_t i = 0; i < params.difficulty_T; ++i) {
        mpz_mul(y.get_mpz_t(), y.get_mpz_t(), y.get_mpz_t());
        mpz_mod(y.get_mpz_t(), y.get_mpz_t(), n.get_mpz_t());
    }
    out.output_y = y;

    const mpz_class ell = hash_to_prime(vdf_fs_transcript(params, x, y));
    out.fs_challenge_prime = ell;

    // Long division of 2^T by ell, one quotient bit per step, applied to pi
    // as it is produced: pi = x^floor(2^T / ell).
    mpz_class r = 1, pi = 1, r2;
    for (std::uint64_t i = 0; i < params.difficulty_T; ++i) {
        r2 = r << 1;
        mpz_mul(pi.get_mpz_t(), pi.get_mpz_t(), pi.get_mpz_t());
        if (r2 >= ell) {
            r = r2 - ell;
            mpz_mul(pi.get_mpz_t(), pi.get_mpz_t(), x.get_mpz_t());
        } else {
            r = r2;
        }
        mpz_mod(pi.get_mpz_t(), pi.get_mpz_t(), n.get_mpz_t());
    }
    out.proof_pi = pi;
    return out;
}

bool vdf_verify(const VdfParams& params, const VdfProof& proof) {
    const mpz_class& n = params.modulus_N;
    if (n <= 3 || mpz_even_p(n.get_mpz_t())) return false;
    if (proof.input_x <= 1 || !vdf_element_ok(params, proof.input_x)) return false;
    if (!vdf_element_ok(params, proof.output_y) || !vdf_element_ok(params, proof.proof_pi)) return false;

    const mpz_class ell = hash_to_prime(vdf_fs_transcript(params, proof.input_x, proof.output_y));
    if (ell != proof.fs_challenge_prime) return false;

    mpz_class two = 2, r;
    const mpz_class t = from_u64(params.difficulty_T);
    mpz_powm(r.get_mpz_t(), two.get_mpz_t(), t.get_mpz_t(), ell.get_mpz_t());

    mpz_class lhs, xr;
    mpz_powm(lhs.get_mpz_t(), proof.proof_pi.get_mpz_t(), ell.get_mpz_t(), n.get_mpz_t());
    mpz_powm(xr.get_mpz_t(), proof.input_x.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    lhs = lhs * xr % n;
    return lhs == proof.output_y;
}

}  // namespace first
