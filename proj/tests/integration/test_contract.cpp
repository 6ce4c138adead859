#include <gtest/gtest.h>

#include "../support/fixtures.hpp"

using namespace first;
using namespace first::testing;

namespace {

struct Honest {
    Federation f{5};
    FirstTransaction tx;
    UserSpec alice = user("alice");
    std::uint64_t threshold = f.d.contract.freshness_threshold;

    Honest() {
        auto o = run_one(f, alice);
        EXPECT_TRUE(o.tx);
        tx = *o.tx;
    }

    std::uint64_t issued_at() const { return ChallengeMessage::decode(tx.m_agg.messages[0])->block_curr; }
    mpz_class ell() const { return ChallengeMessage::decode(tx.m_agg.messages[0])->ell; }

    // Valid aggregate over messages signed by the given verifiers.
    SignedBundle bundle(const std::vector<std::uint32_t>& ids, const std::function<Bytes(std::uint32_t)>& msg) {
        std::vector<Bytes> ms;
        std::vector<Signature> ss;
        SignedBundle b;
        for (auto i : ids) {
            ms.push_back(msg(i));
            ss.push_back(sign(f.d.verifiers[i].keypair, ms.back()));
            b.public_keys.push_back(f.d.roster()[i]);
        }
        auto agg = aggregate(ms, ss);
        b.agg_sigma = agg.agg_sigma;
        b.messages = agg.messages;
        return b;
    }

    FirstTransaction resigned(FirstTransaction t) const {
        t.user_sig_prime = sign(alice.keypair, t.payload_m_prime());
        return t;
    }

    ContractVerdict check(const FirstTransaction& t, std::uint64_t now) const {
        return contract_validate(t, now, threshold, f.d.roster());
    }
    ContractVerdict check(const FirstTransaction& t) const { return check(t, issued_at() + 1); }
};

}  // namespace

TEST(ContractMatrix, HonestExecutes) {
    Honest s;
    EXPECT_TRUE(s.check(s.tx).executes());
    EXPECT_TRUE(s.check(s.tx, s.issued_at()).executes());
    EXPECT_TRUE(s.check(s.tx, s.issued_at() + s.threshold).executes());
}

TEST(ContractMatrix, HashMismatch) {
    Honest s;
    auto t = s.tx;
    t.details.function_name = "drain";
    EXPECT_EQ(s.check(s.resigned(t)).reason, RejectReason::HashMismatch);
}

TEST(ContractMatrix, MissingChallenge) {
    Honest s;
    auto t = s.tx;
    const auto ell = s.ell();
    t.m_agg = s.bundle({0, 1, 2, 3, 4}, [&](std::uint32_t i) { return AcceptMessage{i, ell}.encode(); });
    ASSERT_TRUE(aggregate_verify(t.m_agg));
    EXPECT_EQ(s.check(s.resigned(t)).reason, RejectReason::MissingChallenge);
}

TEST(ContractMatrix, MissingAccept) {
    Honest s;
    auto t = s.tx;
    const mpz_class other = s.ell() + 2;
    t.m_agg_prime = s.bundle({0, 1, 2, 3, 4}, [&](std::uint32_t i) { return AcceptMessage{i, other}.encode(); });
    ASSERT_TRUE(aggregate_verify(t.m_agg_prime));
    EXPECT_EQ(s.check(s.resigned(t)).reason, RejectReason::MissingAccept);
}

TEST(ContractMatrix, NoMajorityInEitherBundle) {
    Honest s;
    auto t = s.tx;
    // j = floor(5/2) = 2
    t.m_agg = s.bundle({0, 1}, [&](std::uint32_t i) {
        auto m = ChallengeMessage::decode(s.tx.m_agg.messages[0]);
        m->verifier_id = i;
        return m->encode();
    });
    ASSERT_TRUE(aggregate_verify(t.m_agg));
    auto v = s.check(s.resigned(t));
    EXPECT_EQ(v.reason, RejectReason::NoMajority) << v.detail;

    auto u = s.tx;
    const auto ell = s.ell();
    u.m_agg_prime = s.bundle({3, 4}, [&](std::uint32_t i) { return AcceptMessage{i, ell}.encode(); });
    EXPECT_EQ(s.check(s.resigned(u)).reason, RejectReason::NoMajority);
}

TEST(ContractMatrix, NoMajorityFromUnregisteredKeys) {
    Honest s;
    Federation outsiders(5, 99);
    auto t = s.tx;
    // same message set, but signed and keyed by an unrelated federation
    SignedBundle b;
    std::vector<Signature> sigs;
    for (std::uint32_t i = 0; i < 5; ++i) {
        sigs.push_back(sign(outsiders.d.verifiers[i].keypair, t.m_agg.messages[i]));
        b.public_keys.push_back(outsiders.d.roster()[i]);
    }
    auto agg = aggregate(t.m_agg.messages, sigs);
    b.agg_sigma = agg.agg_sigma;
    b.messages = agg.messages;
    ASSERT_TRUE(aggregate_verify(b));
    t.m_agg = b;
    EXPECT_EQ(s.check(s.resigned(t)).reason, RejectReason::NoMajority);
}

TEST(ContractMatrix, BadAggregate) {
    Honest s;
    auto t = s.tx;
    t.m_agg_prime.agg_sigma = sign(s.f.d.verifiers[0].keypair, as_bytes("unrelated"));
    EXPECT_EQ(s.check(s.resigned(t)).reason, RejectReason::BadAggregate);

    auto u = s.tx;
    u.m_agg.agg_sigma = t.m_agg_prime.agg_sigma;
    EXPECT_EQ(s.check(s.resigned(u)).reason, RejectReason::BadAggregate);
}

TEST(ContractMatrix, Stale) {
    Honest s;
    auto late = s.check(s.tx, s.issued_at() + s.threshold + 1);
    EXPECT_EQ(late.reason, RejectReason::Stale);
    EXPECT_EQ(s.check(s.tx, s.issued_at() - 1).reason, RejectReason::Stale);
}

TEST(ContractMatrix, BadUserSignature) {
    Honest s;
    auto t = s.tx;
    t.user_sig_prime = sign(keygen(as_bytes("mallory")), t.payload_m_prime());
    EXPECT_EQ(s.check(t).reason, RejectReason::BadUserSignature);
    auto u = s.tx;
    u.declared_tip_pct += 1;
    EXPECT_EQ(s.check(u).executes(), true);  // the tip is outside M'
}

TEST(FirstContractTest, ExecutesOncePerChallenge) {
    Honest s;
    FirstContract c(s.f.d.contract);
    EXPECT_TRUE(c.execute(s.tx, s.issued_at() + 1).executes());
    auto again = c.execute(s.tx, s.issued_at() + 1);
    EXPECT_EQ(again.reason, RejectReason::ChallengeReused);
    EXPECT_EQ(c.executed(), 1u);
    EXPECT_EQ(c.execute(s.tx, s.issued_at() + 100).reason, RejectReason::Stale);
}
