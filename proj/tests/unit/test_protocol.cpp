#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "first/common/bigint.hpp"

using namespace first;
using namespace first::testing;

namespace {

std::string reason_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return std::string(e.reason());
    }
    return "none";
}

// Drives the rounds by direct calls, without actors.
struct Manual {
    Federation f{3};
    UserTxIntent intent = user_prepare_intent("0xalice", "buy", "0xf1257c0de", keygen(as_bytes("alice")));
    std::set<mpz_class> issued;
    Drbg rng{7, "manual"};

    ChallengeRecord issue() {
        return coordinator_issue(f.d.verifiers[0], issued, intent.digest_h, f.chain.height(), rng);
    }

    std::vector<Response> endorse_all(const mpz_class& ell) {
        std::vector<Response> out;
        for (auto& v : f.d.verifiers) {
            auto r = verifier_endorse_challenge(v, intent.digest_h, ell, intent.user_sig, intent.user_keypair.public_v,
                                                f.chain.height());
            if (r) out.push_back(*r.response);
        }
        return out;
    }

    std::vector<Response> accept_all(const mpz_class& ell, const VdfProof& proof) {
        std::vector<Response> out;
        for (auto& v : f.d.verifiers) {
            auto r = verifier_endorse_proof(v, ell, proof);
            if (r) out.push_back(*r.response);
        }
        return out;
    }

    FirstTransaction honest_tx() {
        auto rec = issue();
        auto m_agg = coordinator_aggregate(endorse_all(rec.ell), f.d.roster(), challenge_content(rec.ell, intent.digest_h));
        EXPECT_TRUE(m_agg);
        auto proof = user_eval_and_submit_proof(intent, *m_agg, f.d.pp, f.d.sigma_pp, f.d.roster());
        EXPECT_TRUE(proof);
        auto m_agg_prime = coordinator_aggregate(accept_all(rec.ell, *proof), f.d.roster(), accept_content(rec.ell));
        EXPECT_TRUE(m_agg_prime);
        auto tx = user_build_tx(intent, *m_agg, *m_agg_prime, f.d.roster(), 20);
        EXPECT_TRUE(tx);
        return *tx;
    }
};

}  // namespace

TEST(Messages, RoundTrips) {
    TxDetails d{"0xa", "f", "0xsc"};
    EXPECT_EQ(TxDetails::decode(d.encode()), d);
    ChallengeMessage c{mpz_class(1234567), d.digest(), 2, 99};
    EXPECT_EQ(ChallengeMessage::decode(c.encode()), c);
    AcceptMessage a{1, mpz_class(77)};
    EXPECT_EQ(AcceptMessage::decode(a.encode()), a);
    EXPECT_FALSE(AcceptMessage::decode(c.encode()));
    EXPECT_FALSE(ChallengeMessage::decode(a.encode()));

    Bytes trailing = c.encode();
    trailing.push_back(0);
    EXPECT_FALSE(ChallengeMessage::decode(trailing));
    Bytes truncated = c.encode();
    truncated.pop_back();
    EXPECT_FALSE(ChallengeMessage::decode(truncated));

    VdfProof p{5, 6, 7, 11};
    EXPECT_EQ(decode_proof(encode_proof(p)), p);
}

TEST(Messages, ChallengeRecordIsMonotone) {
    ChallengeRecord r;
    EXPECT_TRUE(r.advance(ChallengeState::Evaluated));
    EXPECT_FALSE(r.advance(ChallengeState::Issued));
    EXPECT_TRUE(r.advance(ChallengeState::Consumed));
    EXPECT_FALSE(r.advance(ChallengeState::Evaluated));
}

TEST(Messages, TransactionRoundTrip) {
    Manual m;
    auto tx = m.honest_tx();
    auto back = FirstTransaction::decode(tx.encode());
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, tx);
    EXPECT_EQ(back->hash(), tx.hash());
}

TEST(SystemSetup, OddCountsOnly) {
    Chain chain;
    Drbg rng(1, "setup");
    auto s3 = system_setup(3, 64, rng, chain, "0xa");
    std::set<PublicKey> keys(s3.contract.verifier_keys.begin(), s3.contract.verifier_keys.end());
    EXPECT_EQ(keys.size(), 3u);
    EXPECT_EQ(reason_of([&] { system_setup(4, 64, rng, chain, "0xb"); }), "EvenVerifierCount");
    EXPECT_EQ(reason_of([&] { system_setup(1, 64, rng, chain, "0xc"); }), "EvenVerifierCount");

    auto s5 = system_setup(5, 64, rng, chain, "0xd");
    auto found = chain.find_contract("0xd");
    ASSERT_TRUE(found);
    EXPECT_EQ(found->verifier_keys, s5.contract.verifier_keys);
    EXPECT_EQ(reason_of([&] { system_setup(3, 64, rng, chain, "0xd"); }), "ContractExists");
}

TEST(ParamGen, FixedSharesSumToModulus) {
    Chain chain;
    Drbg rng(2, "pg");
    auto s = system_setup(3, 4, rng, chain, "0xa");
    ParamGenOptions o;
    const std::vector<long> shares{1049, 1061, 1063};
    o.share_source = [&](std::uint32_t id, unsigned) { return mpz_class(shares[id]); };
    auto r = param_gen(s.verifiers, 4, 1, rng, o);
    // oracle: integer addition of three primes
    for (long p : shares) EXPECT_GT(mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 30), 0);
    EXPECT_EQ(r.pp.vdf.modulus_N, 1049 + 1061 + 1063);
    EXPECT_EQ(r.restarts, 0u);
    for (auto& v : s.verifiers) EXPECT_EQ(v.current_pp, r.pp);
}

TEST(ParamGen, CompositeShareRestartsRound) {
    Chain chain;
    Drbg rng(3, "pg");
    auto s = system_setup(3, 4, rng, chain, "0xa");
    ParamGenOptions o;
    o.share_source = [&](std::uint32_t id, unsigned round) {
        if (round == 0 && id == 1) return mpz_class(1050);
        return mpz_class(std::vector<long>{1049, 1061, 1063}[id]);
    };
    auto r = param_gen(s.verifiers, 4, 1, rng, o);
    EXPECT_EQ(r.restarts, 1u);
    ASSERT_GE(r.events.size(), 2u);
    EXPECT_NE(r.events.front().find("1050"), std::string::npos);
    EXPECT_NE(r.events.front().find("restart"), std::string::npos);
    EXPECT_EQ(r.pp.vdf.modulus_N, 3173);

    o.share_source = [](std::uint32_t, unsigned) { return mpz_class(1050); };
    o.max_rounds = 3;
    EXPECT_EQ(reason_of([&] { param_gen(s.verifiers, 4, 1, rng, o); }), "SetupFailed");
    EXPECT_EQ(reason_of([&] { param_gen(s.verifiers, 0, 1, rng, {}); }), "InvalidDifficulty");
}

TEST(ParamGen, EveryVerifierSignsPublicParams) {
    Federation f(3);
    ASSERT_EQ(f.d.sigma_pp.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(verify(f.d.roster()[i], f.d.pp.encode(), f.d.sigma_pp[i]));
    EXPECT_TRUE(mpz_odd_p(f.d.pp.vdf.modulus_N.get_mpz_t()));
    EXPECT_GT(mpz_sizeinbase(f.d.pp.vdf.modulus_N.get_mpz_t(), 2), 128u);
}

TEST(EpochRotate, DecreaseNeedsEmptyPool) {
    Federation f(3, 1, 64);
    Drbg rng(4, "rotate");
    EpochConstraints c;
    c.param_gen.share_bits = 160;
    c.pending_pool_size = 2;
    auto up = epoch_rotate(f.d, 128, c, rng);
    EXPECT_EQ(up.difficulty_T, 128u);
    EXPECT_EQ(up.epoch_id, 2u);
    EXPECT_EQ(reason_of([&] { epoch_rotate(f.d, 64, c, rng); }), "PendingPoolNotEmpty");
    EXPECT_EQ(f.d.pp.vdf.difficulty_T, 128u);
    c.pending_pool_size = 0;
    EXPECT_EQ(epoch_rotate(f.d, 64, c, rng).epoch_id, 3u);

    c.t2_seconds = 1e6;
    EXPECT_EQ(reason_of([&] { epoch_rotate(f.d, 64, c, rng); }), "InvalidEpoch");
}

TEST(EpochRotate, PreRotationChallengeCannotEndorse) {
    Manual m;
    auto rec = m.issue();
    auto m_agg = coordinator_aggregate(m.endorse_all(rec.ell), m.f.d.roster(), challenge_content(rec.ell, m.intent.digest_h));
    ASSERT_TRUE(m_agg);
    auto proof = user_eval_and_submit_proof(m.intent, *m_agg, m.f.d.pp, m.f.d.sigma_pp, m.f.d.roster());
    ASSERT_TRUE(proof);

    Drbg rng(5, "rotate");
    EpochConstraints c;
    c.param_gen.share_bits = 160;
    epoch_rotate(m.f.d, 32, c, rng);
    for (auto& v : m.f.d.verifiers) {
        EXPECT_TRUE(v.issued_list_D.empty());
        EXPECT_TRUE(v.used_list_U.empty());
        auto r = verifier_endorse_proof(v, rec.ell, *proof);
        EXPECT_FALSE(r);
        EXPECT_EQ(r.refusal, Refusal::UnknownEll);
    }
}

TEST(Intent, CanonicalDigestAndSignature) {
    auto kp = keygen(as_bytes("alice"));
    auto a = user_prepare_intent("0xalice", "buy", "0xsc", kp);
    auto b = user_prepare_intent("0xalice", "buy", "0xsc", kp);
    EXPECT_EQ(a.digest_h, b.digest_h);

    // oracle: hand-built encoding, hashed independently
    Bytes enc;
    auto put = [&](std::string_view s) {
        std::uint32_t n = static_cast<std::uint32_t>(s.size());
        for (int sh = 24; sh >= 0; sh -= 8) enc.push_back(static_cast<std::uint8_t>(n >> sh));
        enc.insert(enc.end(), s.begin(), s.end());
    };
    put("M_A");
    put("0xalice");
    put("buy");
    put("0xsc");
    EXPECT_EQ(a.digest_h, sha256(enc));

    EXPECT_TRUE(verify(kp.public_v, a.digest_h, a.user_sig));
    auto c = user_prepare_intent("0xalice", "sell", "0xsc", kp);
    EXPECT_NE(a.digest_h, c.digest_h);
}

TEST(CoordinatorIssue, FreshPrimesOfTwiceK) {
    Manual m;
    auto a = m.issue();
    auto b = m.issue();
    EXPECT_NE(a.ell, b.ell);
    EXPECT_EQ(mpz_sizeinbase(a.ell.get_mpz_t(), 2), 128u);
    EXPECT_TRUE(ell_well_formed(m.f.d.pp, a.ell));
}

TEST(VerifierEndorseChallenge, FreshReusedAndBadSignature) {
    Manual m;
    auto& v = m.f.d.verifiers[1];
    auto rec = m.issue();
    auto r = verifier_endorse_challenge(v, m.intent.digest_h, rec.ell, m.intent.user_sig,
                                        m.intent.user_keypair.public_v, 100);
    ASSERT_TRUE(r);
    EXPECT_EQ(v.issued_list_D.size(), 1u);
    auto msg = ChallengeMessage::decode(r.response->message);
    ASSERT_TRUE(msg);
    EXPECT_EQ(msg->verifier_id, 1u);
    EXPECT_EQ(msg->block_curr, 100u);
    EXPECT_TRUE(verify(v.keypair.public_v, r.response->message, r.response->sig));

    auto again = verifier_endorse_challenge(v, m.intent.digest_h, rec.ell, m.intent.user_sig,
                                            m.intent.user_keypair.public_v, 100);
    EXPECT_FALSE(again);
    EXPECT_EQ(again.refusal, Refusal::ReusedEll);
    EXPECT_EQ(v.issued_list_D.size(), 1u);

    auto other = m.issue();
    auto forged = sign(keygen(as_bytes("mallory")), m.intent.digest_h);
    auto bad = verifier_endorse_challenge(v, m.intent.digest_h, other.ell, forged, m.intent.user_keypair.public_v, 100);
    EXPECT_EQ(bad.refusal, Refusal::BadUserSignature);
    EXPECT_EQ(v.issued_list_D.size(), 1u);

    auto composite = verifier_endorse_challenge(v, m.intent.digest_h, other.ell + 1, m.intent.user_sig,
                                                m.intent.user_keypair.public_v, 100);
    EXPECT_EQ(composite.refusal, Refusal::MalformedEll);
}

TEST(VerifierEndorseChallenge, ReplayedEllRefusedByAllHonest) {
    Manual m;
    auto rec = m.issue();
    EXPECT_EQ(m.endorse_all(rec.ell).size(), 3u);
    for (auto& v : m.f.d.verifiers) {
        auto r = verifier_endorse_challenge(v, m.intent.digest_h, rec.ell, m.intent.user_sig,
                                            m.intent.user_keypair.public_v, 101);
        EXPECT_EQ(r.refusal, Refusal::ReusedEll);
    }
}

TEST(CoordinatorAggregate, MajorityRule) {
    Federation f(5);
    auto intent = user_prepare_intent("0xa", "f", "0xsc", keygen(as_bytes("a")));
    mpz_class ell("0x" + std::string(32, 'f'));  // content only; never used as a VDF input here
    std::vector<Response> rs;
    for (std::uint32_t i = 0; i < 5; ++i) {
        Response r{i, ChallengeMessage{ell, intent.digest_h, i, 100}.encode(), {}};
        r.sig = sign(f.d.verifiers[i].keypair, r.message);
        rs.push_back(r);
    }
    auto check = challenge_content(ell, intent.digest_h);

    std::vector<Response> two(rs.begin(), rs.begin() + 2);
    EXPECT_FALSE(coordinator_aggregate(two, f.d.roster(), check));

    auto mixed = rs;
    mixed[1].sig = sign(f.d.verifiers[1].keypair, as_bytes("garbage"));
    mixed[3].sig = mixed[0].sig;
    // oracle: per-signature verification picks out exactly three
    std::size_t ok = 0;
    for (auto& r : mixed) ok += verify(f.d.roster()[r.verifier_id], r.message, r.sig);
    EXPECT_EQ(ok, 3u);
    auto b = coordinator_aggregate(mixed, f.d.roster(), check);
    ASSERT_TRUE(b);
    EXPECT_EQ(b->messages.size(), 3u);
    EXPECT_TRUE(aggregate_verify(*b));

    std::vector<Response> three(rs.begin(), rs.begin() + 3);
    Federation g(3);
    for (std::uint32_t i = 0; i < 3; ++i) three[i].sig = sign(g.d.verifiers[i].keypair, three[i].message);
    auto full = coordinator_aggregate(three, g.d.roster(), check);
    ASSERT_TRUE(full);
    EXPECT_EQ(full->messages.size(), 3u);
    EXPECT_TRUE(aggregate_verify(*full));

    // a duplicate from the same verifier counts once
    std::vector<Response> dup{rs[0], rs[0], rs[0], rs[1]};
    EXPECT_FALSE(coordinator_aggregate(dup, f.d.roster(), check));
}

TEST(UserEval, HonestProofVerifiesEverywhere) {
    Manual m;
    auto rec = m.issue();
    auto m_agg = coordinator_aggregate(m.endorse_all(rec.ell), m.f.d.roster(), challenge_content(rec.ell, m.intent.digest_h));
    ASSERT_TRUE(m_agg);
    auto proof = user_eval_and_submit_proof(m.intent, *m_agg, m.f.d.pp, m.f.d.sigma_pp, m.f.d.roster());
    ASSERT_TRUE(proof);
    EXPECT_EQ(proof->input_x, rec.ell);
    for (auto& v : m.f.d.verifiers) EXPECT_TRUE(vdf_verify(v.current_pp.vdf, *proof));
}

TEST(UserEval, MinorityBundleRefused) {
    Manual m;
    auto rec = m.issue();
    auto rs = m.endorse_all(rec.ell);
    std::vector<Bytes> msgs{rs[0].message};
    std::vector<Signature> sigs{rs[0].sig};
    auto small = aggregate(msgs, sigs);
    small.public_keys = {m.f.d.roster()[0]};
    ASSERT_TRUE(aggregate_verify(small));
    EXPECT_FALSE(user_eval_and_submit_proof(m.intent, small, m.f.d.pp, m.f.d.sigma_pp, m.f.d.roster()));
}

TEST(UserEval, TamperedPublicParamSignatureRefused) {
    Manual m;
    auto rec = m.issue();
    auto m_agg = coordinator_aggregate(m.endorse_all(rec.ell), m.f.d.roster(), challenge_content(rec.ell, m.intent.digest_h));
    ASSERT_TRUE(m_agg);
    auto sigma_pp = m.f.d.sigma_pp;
    sigma_pp[1] = sign(m.f.d.verifiers[1].keypair, as_bytes("other pp"));
    EXPECT_FALSE(user_eval_and_submit_proof(m.intent, *m_agg, m.f.d.pp, sigma_pp, m.f.d.roster()));
}

TEST(UserEval, BundleForAnotherDigestRefused) {
    Manual m;
    auto rec = m.issue();
    auto m_agg = coordinator_aggregate(m.endorse_all(rec.ell), m.f.d.roster(), challenge_content(rec.ell, m.intent.digest_h));
    auto other = user_prepare_intent("0xbob", "buy", "0xf1257c0de", keygen(as_bytes("bob")));
    EXPECT_FALSE(user_check_challenge_bundle(other, *m_agg, m.f.d.pp, m.f.d.sigma_pp, m.f.d.roster()));
}

TEST(VerifierEndorseProof, OneShotConsumption) {
    Manual m;
    auto rec = m.issue();
    auto m_agg = coordinator_aggregate(m.endorse_all(rec.ell), m.f.d.roster(), challenge_content(rec.ell, m.intent.digest_h));
    auto proof = user_eval_and_submit_proof(m.intent, *m_agg, m.f.d.pp, m.f.d.sigma_pp, m.f.d.roster());
    ASSERT_TRUE(proof);
    auto& v = m.f.d.verifiers[2];
    auto ok = verifier_endorse_proof(v, rec.ell, *proof);
    ASSERT_TRUE(ok);
    EXPECT_EQ(AcceptMessage::decode(ok.response->message), (AcceptMessage{2, rec.ell}));
    EXPECT_EQ(v.used_list_U.size(), 1u);
    auto again = verifier_endorse_proof(v, rec.ell, *proof);
    EXPECT_EQ(again.refusal, Refusal::ReusedEll);

    auto never = m.issue();
    EXPECT_EQ(verifier_endorse_proof(v, never.ell, *proof).refusal, Refusal::UnknownEll);
}

TEST(VerifierEndorseProof, FailedProofBurnsChallenge) {
    Manual m;
    auto rec = m.issue();
    auto m_agg = coordinator_aggregate(m.endorse_all(rec.ell), m.f.d.roster(), challenge_content(rec.ell, m.intent.digest_h));
    auto proof = user_eval_and_submit_proof(m.intent, *m_agg, m.f.d.pp, m.f.d.sigma_pp, m.f.d.roster());
    ASSERT_TRUE(proof);
    auto bad = *proof;
    bad.output_y += 1;
    auto& v = m.f.d.verifiers[0];
    EXPECT_EQ(verifier_endorse_proof(v, rec.ell, bad).refusal, Refusal::ProofRejected);
    EXPECT_TRUE(v.used_list_U.contains(rec.ell));
    EXPECT_EQ(verifier_endorse_proof(v, rec.ell, *proof).refusal, Refusal::ReusedEll);
}

TEST(UserBuildTx, HonestExecutesAlteredRejectsEmptyRefused) {
    Manual m;
    auto tx = m.honest_tx();
    auto v = contract_validate(tx, m.f.chain.height() + 1, 5, m.f.d.roster());
    EXPECT_TRUE(v.executes()) << v.detail;

    auto altered = tx;
    altered.details.function_name = "sell";
    altered.user_sig_prime = sign(m.intent.user_keypair, altered.payload_m_prime());
    // oracle: recompute H(M_A) and compare with the h inside M_agg
    auto inside = ChallengeMessage::decode(tx.m_agg.messages[0]);
    ASSERT_NE(altered.details.digest(), inside->digest_h);
    EXPECT_EQ(contract_validate(altered, m.f.chain.height(), 5, m.f.d.roster()).reason, RejectReason::HashMismatch);

    EXPECT_FALSE(user_build_tx(m.intent, tx.m_agg, SignedBundle{}, m.f.d.roster(), 20));
}
