#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "first/common/bigint.hpp"
#include "first/common/bytes.hpp"
#include "first/common/drbg.hpp"
#include "first/common/hash.hpp"
#include "first/common/stats.hpp"

using namespace first;

TEST(Bytes, HexRoundTrip) {
    Bytes b{0x00, 0x01, 0xab, 0xff};
    EXPECT_EQ(to_hex(b), "0001abff");
    EXPECT_EQ(from_hex("0001abff"), b);
    EXPECT_EQ(from_hex("0x0001ABFF"), b);
    EXPECT_FALSE(from_hex("abc"));
    EXPECT_FALSE(from_hex("zz"));
}

TEST(Bytes, WriterLayoutIsLengthPrefixedBigEndian) {
    ByteWriter w;
    w.field("ab").u32(0x01020304);
    const Bytes expect{0, 0, 0, 2, 'a', 'b', 0, 0, 0, 4, 1, 2, 3, 4};
    EXPECT_EQ(w.bytes(), expect);
}

TEST(Bytes, ReaderRoundTripAndTruncation) {
    ByteWriter w;
    w.field("hello").u64(42).u32(7);
    Bytes enc = std::move(w).take();
    ByteReader r(enc);
    EXPECT_EQ(r.string_field(), "hello");
    EXPECT_EQ(r.u64(), 42u);
    EXPECT_EQ(r.u32(), 7u);
    EXPECT_TRUE(r.done());

    enc.pop_back();
    ByteReader t(enc);
    t.string_field();
    t.u64();
    EXPECT_FALSE(t.u32());
}

TEST(Hash, Sha256KnownAnswer) {
    EXPECT_EQ(to_hex(sha256(as_bytes("abc"))),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(to_hex(sha256(as_bytes(""))),
              "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Drbg, DeterministicAndLabelSeparated) {
    Drbg a(7, "x"), b(7, "x"), c(7, "y"), d(8, "x");
    auto va = a.bytes(100);
    EXPECT_EQ(va, b.bytes(100));
    EXPECT_NE(va, c.bytes(100));
    EXPECT_NE(va, d.bytes(100));
    Drbg base(1, "root");
    EXPECT_NE(base.fork("p").next_u64(), base.fork("q").next_u64());
    EXPECT_EQ(base.fork("p").next_u64(), base.fork("p").next_u64());
}

TEST(Drbg, UniformStaysInBoundAndCoversRange) {
    Drbg r(3, "u");
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        auto v = r.uniform(10);
        ASSERT_LT(v, 10u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 10u);
}

TEST(BigInt, BytesRoundTrip) {
    mpz_class n("123456789abcdef0123456789", 16);
    EXPECT_EQ(from_bytes(to_bytes(n)), n);
    EXPECT_TRUE(to_bytes(mpz_class(0)).empty());
    EXPECT_EQ(to_bytes(mpz_class(256)), (Bytes{1, 0}));
}

TEST(BigInt, U64Conversions) {
    EXPECT_EQ(to_u64(from_u64(UINT64_MAX)), UINT64_MAX);
    EXPECT_EQ(to_u64(mpz_class(0)), 0u);
    mpz_class big = from_u64(UINT64_MAX) + 1;
    EXPECT_FALSE(to_u64(big));
    EXPECT_FALSE(to_u64(mpz_class(-1)));
}

TEST(BigInt, ParseInteger) {
    mpz_class v;
    ASSERT_TRUE(parse_integer("3173", v));
    EXPECT_EQ(v, 3173);
    ASSERT_TRUE(parse_integer("0xff", v));
    EXPECT_EQ(v, 255);
    EXPECT_FALSE(parse_integer("12a", v));
    EXPECT_FALSE(parse_integer("", v));
}

// Oracle: GMP's own primality test (BPSW plus rounds) on every integer below
// 20000 and on a set of Carmichael numbers.
TEST(BigInt, MillerRabinAgreesWithGmp) {
    for (long i = -3; i < 20000; ++i) {
        mpz_class n = i;
        bool gmp = i >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
        ASSERT_EQ(miller_rabin(n, 16), gmp) << i;
    }
    for (long c : {561L, 1105L, 1729L, 2465L, 2821L, 6601L, 8911L, 41041L, 825265L, 321197185L}) {
        EXPECT_FALSE(miller_rabin(mpz_class(c))) << c;
    }
    EXPECT_TRUE(miller_rabin(mpz_class("170141183460469231731687303715884105727")));  // 2^127 - 1
}

TEST(BigInt, RandomPrimeHasExactBitLength) {
    Drbg r(11, "primes");
    for (unsigned bits : {8u, 32u, 128u}) {
        for (int i = 0; i < 5; ++i) {
            mpz_class p = random_prime(r, bits);
            EXPECT_EQ(mpz_sizeinbase(p.get_mpz_t(), 2), bits);
            EXPECT_GT(mpz_probab_prime_p(p.get_mpz_t(), 40), 0);
        }
    }
}

TEST(Stats, LinearFitExactLine) {
    std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    auto f = linear_fit(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(Stats, LinearFitNoisyLineKnownRSquared) {
    // Hand-computed: x = 0..3, y = {0, 2, 1, 3}: sxx = 5, sxy = 4, syy = 5 -> R^2 = 16/25.
    std::vector<double> x{0, 1, 2, 3}, y{0, 2, 1, 3};
    auto f = linear_fit(x, y);
    EXPECT_NEAR(f.r_squared, 0.64, 1e-12);
    EXPECT_THROW(linear_fit(std::vector<double>{1, 1}, std::vector<double>{1, 2}), std::invalid_argument);
}
