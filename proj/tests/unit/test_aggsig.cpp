#include <gtest/gtest.h>

#include <blst.h>

#include <fstream>
#include <map>

#include "first/aggsig.hpp"
#include "first/common/hash.hpp"

using namespace first;

namespace {

// Pairing oracles written directly against blst, independent of aggsig.cpp.
blst_fp12 pairing(const blst_p2_affine& q, const blst_p1_affine& p) {
    blst_fp12 ml, out;
    blst_miller_loop(&ml, &q, &p);
    blst_final_exp(&out, &ml);
    return out;
}

blst_p1_affine g1_of(const Signature& s) {
    blst_p1_affine p;
    EXPECT_EQ(blst_p1_uncompress(&p, s.bytes.data()), BLST_SUCCESS);
    return p;
}

blst_p2_affine g2_of(const PublicKey& k) {
    blst_p2_affine p;
    EXPECT_EQ(blst_p2_uncompress(&p, k.bytes.data()), BLST_SUCCESS);
    return p;
}

blst_p1_affine h_of(const Bytes& m) {
    blst_p1 h;
    blst_hash_to_g1(&h, m.data(), m.size(), reinterpret_cast<const byte*>(kAggsigDst.data()), kAggsigDst.size());
    blst_p1_affine out;
    blst_p1_to_affine(&out, &h);
    return out;
}

Bytes msg(std::string_view s) { return Bytes(s.begin(), s.end()); }

Signature random_g1(Drbg& rng) {
    auto junk = rng.bytes(32);
    blst_p1 h;
    static const char dst[] = "TEST-RANDOM-G1";
    blst_hash_to_g1(&h, junk.data(), junk.size(), reinterpret_cast<const byte*>(dst), sizeof(dst) - 1);
    Signature s;
    blst_p1_compress(s.bytes.data(), &h);
    return s;
}

}  // namespace

TEST(Keygen, DeterministicAndDistinct) {
    auto a = keygen(as_bytes("seed-a"));
    auto b = keygen(as_bytes("seed-b"));
    EXPECT_EQ(a.public_v, keygen(as_bytes("seed-a")).public_v);
    EXPECT_EQ(a.secret_x, keygen(as_bytes("seed-a")).secret_x);
    EXPECT_NE(a.public_v, b.public_v);
    EXPECT_TRUE(a.public_v.valid());
}

TEST(Keygen, PublicKeyPairsWithSecretScalar) {
    Drbg rng(1, "kg");
    for (int i = 0; i < 4; ++i) {
        auto kp = keygen(rng);
        blst_p1 gx;
        blst_scalar sk;
        blst_scalar_from_bendian(&sk, kp.secret_x.bytes.data());
        byte le[32];
        blst_lendian_from_scalar(le, &sk);
        blst_p1_mult(&gx, blst_p1_generator(), le, 255);
        blst_p1_affine gxa;
        blst_p1_to_affine(&gxa, &gx);
        auto lhs = pairing(*blst_p2_affine_generator(), gxa);
        auto rhs = pairing(g2_of(kp.public_v), *blst_p1_affine_generator());
        EXPECT_TRUE(blst_fp12_is_equal(&lhs, &rhs));
    }
}

TEST(Sign, RoundTripKeyBindingAndTamper) {
    auto kp = keygen(as_bytes("alice"));
    auto other = keygen(as_bytes("bob"));
    auto m = msg("transfer");
    auto s = sign(kp, m);
    EXPECT_EQ(s, sign(kp, m));
    EXPECT_TRUE(verify(kp.public_v, m, s));
    EXPECT_FALSE(verify(other.public_v, m, s));
    EXPECT_FALSE(verify(kp.public_v, msg("transfeR"), s));
    for (int bit = 0; bit < 48 * 8; bit += 7) {
        auto bad = s;
        bad.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        EXPECT_FALSE(verify(kp.public_v, m, bad)) << bit;
    }
}

TEST(Sign, DistinctMessagesGiveDistinctSignatures) {
    auto kp = keygen(as_bytes("k"));
    Drbg rng(2, "msgs");
    for (int i = 0; i < 100; ++i) {
        auto a = rng.bytes(16), b = rng.bytes(16);
        ASSERT_NE(a, b);
        EXPECT_NE(sign(kp, a).bytes, sign(kp, b).bytes);
    }
}

TEST(Verify, MalformedEncodingsAreFalse) {
    auto kp = keygen(as_bytes("k"));
    auto m = msg("m");
    auto s = sign(kp, m);
    EXPECT_TRUE(verify(ByteView(kp.public_v.bytes), m, ByteView(s.bytes)));
    EXPECT_FALSE(verify(ByteView(kp.public_v.bytes).first(95), m, ByteView(s.bytes)));
    EXPECT_FALSE(verify(ByteView(kp.public_v.bytes), m, ByteView(s.bytes).first(47)));
    Signature zero{};
    EXPECT_FALSE(verify(kp.public_v, m, zero));
    // the compressed identity point is well-formed but must not verify
    Signature inf{};
    inf.bytes[0] = 0xc0;
    EXPECT_FALSE(verify(kp.public_v, m, inf));
    PublicKey pinf{};
    pinf.bytes[0] = 0xc0;
    EXPECT_FALSE(verify(pinf, m, inf));
}

TEST(Aggregate, SingleAndCommutative) {
    auto k1 = keygen(as_bytes("1")), k2 = keygen(as_bytes("2"));
    std::vector<Bytes> m{msg("a"), msg("b")};
    auto s1 = sign(k1, m[0]), s2 = sign(k2, m[1]);

    std::vector<Signature> one{s1};
    EXPECT_EQ(aggregate(std::span(m).first(1), one).agg_sigma, s1);

    std::vector<Signature> fwd{s1, s2}, rev{s2, s1};
    EXPECT_EQ(aggregate(m, fwd).agg_sigma, aggregate(m, rev).agg_sigma);
}

TEST(Aggregate, Errors) {
    std::vector<Bytes> m{msg("a")};
    std::vector<Signature> none;
    try {
        aggregate(m, none);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.reason(), "LengthMismatch");
    }
    std::vector<Bytes> empty;
    try {
        aggregate(empty, none);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.reason(), "Empty");
    }
}

TEST(AggregateVerify, ThreePartyAgreesWithPairingProduct) {
    std::vector<KeyPair> keys;
    std::vector<Bytes> m;
    std::vector<Signature> sigs;
    for (int i = 0; i < 3; ++i) {
        keys.push_back(keygen(as_bytes("party" + std::to_string(i))));
        m.push_back(msg("message " + std::to_string(i)));
        sigs.push_back(sign(keys.back(), m.back()));
    }
    auto bundle = aggregate(m, sigs);
    for (auto& k : keys) bundle.public_keys.push_back(k.public_v);
    EXPECT_TRUE(aggregate_verify(bundle));

    auto lhs = pairing(*blst_p2_affine_generator(), g1_of(bundle.agg_sigma));
    blst_fp12 rhs = *blst_fp12_one();
    for (int i = 0; i < 3; ++i) {
        auto t = pairing(g2_of(keys[i].public_v), h_of(m[i]));
        blst_fp12_mul(&rhs, &rhs, &t);
    }
    EXPECT_TRUE(blst_fp12_is_equal(&lhs, &rhs));

    // drop sigma_2 from the product but keep all three messages
    auto partial = aggregate(std::span(m).first(2), std::span(sigs).first(2));
    auto missing = bundle;
    missing.agg_sigma = partial.agg_sigma;
    EXPECT_FALSE(aggregate_verify(missing));

    auto swapped = bundle;
    std::swap(swapped.public_keys[0], swapped.public_keys[1]);
    EXPECT_FALSE(aggregate_verify(swapped));

    auto short_keys = bundle;
    short_keys.public_keys.pop_back();
    EXPECT_FALSE(aggregate_verify(short_keys));
}

TEST(AggregateVerify, DuplicateMessageAlwaysFalse) {
    auto k1 = keygen(as_bytes("1")), k2 = keygen(as_bytes("2"));
    std::vector<Bytes> m{msg("same"), msg("same")};
    std::vector<Signature> sigs{sign(k1, m[0]), sign(k2, m[1])};
    auto bundle = aggregate(m, sigs);
    bundle.public_keys = {k1.public_v, k2.public_v};
    EXPECT_FALSE(aggregate_verify(bundle));
}

TEST(AggregateVerify, SingleCoincidesWithVerify) {
    auto kp = keygen(as_bytes("solo"));
    std::vector<Bytes> m{msg("x")};
    std::vector<Signature> sigs{sign(kp, m[0])};
    auto bundle = aggregate(m, sigs);
    bundle.public_keys = {kp.public_v};
    EXPECT_EQ(aggregate_verify(bundle), verify(kp.public_v, m[0], sigs[0]));
    auto wrong = bundle;
    wrong.messages[0] = msg("y");
    EXPECT_EQ(aggregate_verify(wrong), verify(kp.public_v, wrong.messages[0], sigs[0]));
    EXPECT_FALSE(aggregate_verify(wrong));
}

TEST(AggregateVerify, RandomG1ElementNeverVerifies) {
    Drbg rng(4, "forge");
    auto kp = keygen(as_bytes("victim"));
    SignedBundle b;
    b.messages = {msg("m")};
    b.public_keys = {kp.public_v};
    for (int i = 0; i < 1000; ++i) {
        b.agg_sigma = random_g1(rng);
        ASSERT_FALSE(aggregate_verify(b));
    }
}

// Encodings are frozen in tests/golden/aggsig_v1.txt as "name hex" lines.
TEST(Golden, EncodingsAreStable) {
    std::ifstream in(std::string(FIRST_GOLDEN_DIR) + "/aggsig_v1.txt");
    ASSERT_TRUE(in) << "golden file missing";
    std::map<std::string, std::string> golden;
    std::string name, hex;
    while (in >> name >> hex) golden[name] = hex;

    auto kp = keygen(as_bytes("golden-0"));
    auto s = sign(kp, msg("golden message"));
    auto kp2 = keygen(as_bytes("golden-1"));
    std::vector<Bytes> m{msg("golden message"), msg("second")};
    std::vector<Signature> sigs{s, sign(kp2, m[1])};
    auto agg = aggregate(m, sigs);

    EXPECT_EQ(golden["secret_key"], to_hex(kp.secret_x.bytes));
    EXPECT_EQ(golden["public_key"], to_hex(kp.public_v.bytes));
    EXPECT_EQ(golden["signature"], to_hex(s.bytes));
    EXPECT_EQ(golden["aggregate"], to_hex(agg.agg_sigma.bytes));

    byte g1[48];
    blst_p1_affine_compress(g1, blst_p1_affine_generator());
    EXPECT_EQ(to_hex(ByteView(g1, 48)).substr(0, 8), "97f1d3a7");
}
