#include "first/aggsig.hpp"

#include <blst.h>

#include <algorithm>
#include <set>

#include "first/common/hash.hpp"

namespace first {

namespace {

const byte* dst_ptr() { return reinterpret_cast<const byte*>(kAggsigDst.data()); }

bool decode_g1(const Signature& s, blst_p1_affine& out) {
    if (blst_p1_uncompress(&out, s.bytes.data()) != BLST_SUCCESS) return false;
    return !blst_p1_affine_is_inf(&out) && blst_p1_affine_in_g1(&out);
}

bool decode_g2(const PublicKey& k, blst_p2_affine& out) {
    if (blst_p2_uncompress(&out, k.bytes.data()) != BLST_SUCCESS) return false;
    return !blst_p2_affine_is_inf(&out) && blst_p2_affine_in_g2(&out);
}

blst_p1_affine hash_to_g1(ByteView message) {
    blst_p1 h;
    blst_hash_to_g1(&h, message.data(), message.size(), dst_ptr(), kAggsigDst.size());
    blst_p1_affine out;
    blst_p1_to_affine(&out, &h);
    return out;
}

}  // namespace

std::optional<PublicKey> PublicKey::from_bytes(ByteView in) {
    if (in.size() != 96) return std::nullopt;
    PublicKey k;
    std::copy(in.begin(), in.end(), k.bytes.begin());
    return k;
}

bool PublicKey::valid() const {
    blst_p2_affine p;
    return decode_g2(*this, p);
}

std::optional<Signature> Signature::from_bytes(ByteView in) {
    if (in.size() != 48) return std::nullopt;
    Signature s;
    std::copy(in.begin(), in.end(), s.bytes.begin());
    return s;
}

bool Signature::valid() const {
    blst_p1_affine p;
    return decode_g1(*this, p);
}

KeyPair keygen(ByteView seed) {
    ByteWriter w;
    w.field("first/aggsig/keygen/v1").field(seed);
    const Digest ikm = sha256(w.bytes());
    blst_scalar sk;
    blst_keygen(&sk, ikm.data(), ikm.size());

    KeyPair kp;
    blst_bendian_from_scalar(kp.secret_x.bytes.data(), &sk);
    blst_p2 pk;
    blst_sk_to_pk_in_g2(&pk, &sk);
    blst_p2_compress(kp.public_v.bytes.data(), &pk);
    return kp;
}

KeyPair keygen(Drbg& rng) { return keygen(rng.bytes(32)); }

Signature sign(const KeyPair& kp, ByteView message) {
    blst_scalar sk;
    blst_scalar_from_bendian(&sk, kp.secret_x.bytes.data());
    blst_p1 h;
    blst_hash_to_g1(&h, message.data(), message.size(), dst_ptr(), kAggsigDst.size());
    blst_p1 sig;
    blst_sign_pk_in_g2(&sig, &h, &sk);
    Signature out;
    blst_p1_compress(out.bytes.data(), &sig);
    return out;
}

bool verify(const PublicKey& pk, ByteView message, const Signature& sig) {
    blst_p1_affine s;
    blst_p2_affine v;
    if (!decode_g1(sig, s) || !decode_g2(pk, v)) return false;
    const blst_p1_affine h = hash_to_g1(message);
    blst_fp12 lhs, rhs;
    blst_miller_loop(&lhs, blst_p2_affine_generator(), &s);
    blst_miller_loop(&rhs, &v, &h);
    return blst_fp12_finalverify(&lhs, &rhs);
}

bool verify(ByteView pk, ByteView message, ByteView sig) {
    auto k = PublicKey::from_bytes(pk);
    auto s = Signature::from_bytes(sig);
    return k && s && verify(*k, message, *s);
}

SignedBundle aggregate(std::span<const Bytes> messages, std::span<const Signature> signatures) {
    if (messages.size() != signatures.size())
        throw Error("LengthMismatch", std::to_string(messages.size()) + " messages vs " +
                                          std::to_string(signatures.size()) + " signatures");
    if (messages.empty()) throw Error("Empty", "nothing to aggregate");

    blst_p1 acc;
    bool first = true;
    for (const auto& sig : signatures) {
        blst_p1_affine p;
        if (blst_p1_uncompress(&p, sig.bytes.data()) != BLST_SUCCESS)
            throw Error("BadSignature", "undecodable signature in aggregate");
        if (first) {
            blst_p1_from_affine(&acc, &p);
            first = false;
        } else {
            blst_p1_add_or_double_affine(&acc, &acc, &p);
        }
    }
    SignedBundle out;
    blst_p1_compress(out.agg_sigma.bytes.data(), &acc);
    out.messages.assign(messages.begin(), messages.end());
    return out;
}

bool aggregate_verify(const SignedBundle& bundle) {
    const auto n = bundle.messages.size();
    if (n == 0 || bundle.public_keys.size() != n) return false;
    std::set<Bytes> seen(bundle.messages.begin(), bundle.messages.end());
    if (seen.size() != n) return false;

    blst_p1_affine s;
    if (!decode_g1(bundle.agg_sigma, s)) return false;

    blst_fp12 rhs = *blst_fp12_one();
    for (std::size_t i = 0; i < n; ++i) {
        blst_p2_affine v;
        if (!decode_g2(bundle.public_keys[i], v)) return false;
        const blst_p1_affine h = hash_to_g1(bundle.messages[i]);
        blst_fp12 term;
        blst_miller_loop(&term, &v, &h);
        blst_fp12_mul(&rhs, &rhs, &term);
    }
    blst_fp12 lhs;
    blst_miller_loop(&lhs, blst_p2_affine_generator(), &s);
    return blst_fp12_finalverify(&lhs, &rhs);
}

}  // namespace first
