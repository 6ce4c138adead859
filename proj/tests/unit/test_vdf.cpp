#include <gtest/gtest.h>

#include "first/common/bigint.hpp"
#include "first/vdf.hpp"

using namespace first;

namespace {

VdfParams small_params() { return vdf_setup(16, 4, 3173); }

// x^floor(2^T / ell) mod N with 2^T materialised; only viable for small T.
mpz_class direct_pi(const mpz_class& x, std::uint64_t T, const mpz_class& ell, const mpz_class& N) {
    mpz_class two_t, q, out;
    mpz_ui_pow_ui(two_t.get_mpz_t(), 2, T);
    mpz_fdiv_q(q.get_mpz_t(), two_t.get_mpz_t(), ell.get_mpz_t());
    mpz_powm(out.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t(), N.get_mpz_t());
    return out;
}

mpz_class sum_of_primes_modulus(Drbg& rng, unsigned share_bits) {
    mpz_class n = 0;
    for (int i = 0; i < 3; ++i) n += random_prime(rng, share_bits);
    return n;
}

}  // namespace

TEST(VdfSetup, Examples) {
    // 1049 + 1061 + 1063 = 3173, all three prime
    for (long s : {1049L, 1061L, 1063L}) EXPECT_TRUE(miller_rabin(mpz_class(s)));
    EXPECT_EQ(1049 + 1061 + 1063, 3173);

    auto p = vdf_setup(16, 4, 3173);
    EXPECT_EQ(p.modulus_N, 3173);
    EXPECT_EQ(p.difficulty_T, 4u);
    EXPECT_EQ(p.security_k, 16u);

    auto z = vdf_setup(16, 0, 15);
    EXPECT_EQ(z.modulus_N, 15);
    EXPECT_EQ(z.difficulty_T, 0u);
}

TEST(VdfSetup, Errors) {
    auto reason = [](auto fn) {
        try {
            fn();
        } catch (const Error& e) {
            return std::string(e.reason());
        }
        return std::string("none");
    };
    EXPECT_EQ(reason([] { vdf_setup(16, 4, 16); }), "EvenModulus");
    EXPECT_EQ(reason([] { vdf_setup(16, 4, 3); }), "TinyModulus");
    EXPECT_EQ(reason([] { vdf_setup(16, 4, -7); }), "TinyModulus");
    mpz_class huge = 1;
    huge <<= 64;
    EXPECT_EQ(reason([&] { vdf_setup(16, huge, 3173); }), "DifficultyOverflow");
    EXPECT_EQ(reason([] { vdf_setup(16, -1, 3173); }), "DifficultyOverflow");
    EXPECT_EQ(reason([&] { vdf_setup(16, huge - 1, 3173); }), "none");
}

TEST(VdfEval, ZeroDifficultyIsIdentity) {
    auto p = vdf_setup(16, 0, 15);
    auto proof = vdf_eval(p, 7);
    EXPECT_EQ(proof.output_y, 7);
    EXPECT_TRUE(vdf_verify(p, proof));
}

TEST(VdfEval, SmallExampleMatchesRepeatedSquaring) {
    // Oracle: 16 = 2^4 plain multiplications in machine integers.
    std::uint64_t acc = 1;
    for (int i = 0; i < 16; ++i) acc = acc * 2 % 3173;
    EXPECT_EQ(acc, 2076u);

    auto proof = vdf_eval(small_params(), 2);
    EXPECT_EQ(proof.output_y, 2076);
    EXPECT_EQ(proof.input_x, 2);
    EXPECT_TRUE(vdf_verify(small_params(), proof));
}

TEST(VdfEval, StreamedProofMatchesDirectQuotient) {
    Drbg rng(5, "vdf-pi");
    for (int trial = 0; trial < 40; ++trial) {
        mpz_class n = sum_of_primes_modulus(rng, 64);
        std::uint64_t T = rng.uniform(600);
        auto p = vdf_setup(64, T, n);
        mpz_class x = from_bytes(rng.bytes(24)) % (n - 3) + 2;
        if (!vdf_element_ok(p, x)) continue;
        auto proof = vdf_eval(p, x);
        EXPECT_EQ(proof.proof_pi, direct_pi(x, T, proof.fs_challenge_prime, n));
        mpz_class y;
        mpz_class e;
        mpz_ui_pow_ui(e.get_mpz_t(), 2, T);
        mpz_powm(y.get_mpz_t(), x.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
        EXPECT_EQ(proof.output_y, y);
    }
}

TEST(VdfEval, RejectsOutOfRangeInput) {
    auto p = small_params();
    for (long x : {0L, 1L, 3173L, 4000L, -2L}) {
        try {
            vdf_eval(p, x);
            FAIL() << x;
        } catch (const Error& e) {
            EXPECT_EQ(e.reason(), "InputOutOfRange");
        }
    }
}

TEST(VdfVerify, TamperedOutputRejects) {
    auto p = small_params();
    auto proof = vdf_eval(p, 2);
    auto bad = proof;
    bad.output_y += 1;
    EXPECT_FALSE(vdf_verify(p, bad));
}

TEST(VdfVerify, UnitProofRejectsWhenCongruenceFails) {
    // With T = 4 the quotient floor(16 / ell) is 0, so the honest proof is 1.
    EXPECT_EQ(vdf_eval(small_params(), 2).proof_pi, 1);

    auto p = vdf_setup(16, 300, 3173);
    auto proof = vdf_eval(p, 2);
    auto bad = proof;
    bad.proof_pi = 1;
    // Oracle: with pi = 1 the congruence reduces to x^(2^T mod ell) == y.
    mpz_class r, rhs, two = 2, t = 300;
    mpz_powm(r.get_mpz_t(), two.get_mpz_t(), t.get_mpz_t(), proof.fs_challenge_prime.get_mpz_t());
    mpz_powm(rhs.get_mpz_t(), two.get_mpz_t(), r.get_mpz_t(), p.modulus_N.get_mpz_t());
    ASSERT_NE(rhs, proof.output_y);
    EXPECT_TRUE(vdf_verify(p, proof));
    EXPECT_FALSE(vdf_verify(p, bad));
}

TEST(VdfVerify, WrongParamsReject) {
    auto p = small_params();
    auto proof = vdf_eval(p, 2);
    auto other = vdf_setup(16, 5, 3173);
    EXPECT_FALSE(vdf_verify(other, proof));
    auto even = p;
    even.modulus_N = 3172;
    EXPECT_FALSE(vdf_verify(even, proof));
}

TEST(VdfProperty, RoundTripAndSingleFieldMutations) {
    Drbg rng(9, "vdf-prop");
    mpz_class n = sum_of_primes_modulus(rng, 126);
    int mutations = 0;
    while (mutations < 200) {
        std::uint64_t T = rng.uniform(4097);
        auto p = vdf_setup(64, T, n);
        mpz_class x = from_bytes(rng.bytes(20)) % (n - 3) + 2;
        if (!vdf_element_ok(p, x)) continue;
        auto proof = vdf_eval(p, x);
        ASSERT_TRUE(vdf_verify(p, proof));
        EXPECT_EQ(vdf_eval(p, x), proof);
        for (int m = 0; m < 10; ++m, ++mutations) {
            auto bad = proof;
            mpz_class delta = from_bytes(rng.bytes(8)) + 1;
            switch (rng.uniform(4)) {
                case 0: bad.input_x = (bad.input_x + delta) % n; break;
                case 1: bad.output_y = (bad.output_y + delta) % n; break;
                case 2: bad.proof_pi = (bad.proof_pi + delta) % n; break;
                default: bad.fs_challenge_prime += 2 * delta; break;
            }
            if (bad == proof) continue;
            EXPECT_FALSE(vdf_verify(p, bad));
        }
    }
}

TEST(HashToPrime, DeterministicPrimeOfConfiguredWidth) {
    Bytes data{1, 2, 3};
    auto a = hash_to_prime(data);
    EXPECT_EQ(a, hash_to_prime(data));
    EXPECT_EQ(mpz_sizeinbase(a.get_mpz_t(), 2), kFsPrimeBits);
    EXPECT_TRUE(mpz_odd_p(a.get_mpz_t()));
    EXPECT_GT(mpz_probab_prime_p(a.get_mpz_t(), 50), 0);
    auto s = hash_to_prime(data, 64);
    EXPECT_EQ(mpz_sizeinbase(s.get_mpz_t(), 2), 64u);
}

TEST(HashToPrime, OneBitFlipsGiveDistinctPrimes) {
    Drbg rng(13, "h2p");
    for (int i = 0; i < 1000; ++i) {
        Bytes a = rng.bytes(1 + rng.uniform(48));
        Bytes b = a;
        auto bit = rng.uniform(a.size() * 8);
        b[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        auto pa = hash_to_prime(a);
        ASSERT_NE(pa, hash_to_prime(b));
        ASSERT_TRUE(miller_rabin(pa, 64));
    }
}
