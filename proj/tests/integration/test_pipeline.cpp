#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "../support/fixtures.hpp"

using namespace first;
using namespace first::testing;

namespace {

template <class Needle>
bool contains(const Bytes& hay, const Needle& needle) {
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

ContractVerdict settle(Federation& f, const FirstTransaction& tx) {
    return contract_validate(tx, f.chain.height() + 1, f.d.contract.freshness_threshold, f.d.roster());
}

std::vector<VerifierBehavior> with_byzantine(std::uint32_t n, std::initializer_list<std::uint32_t> ids,
                                             VerifierBehavior b) {
    std::vector<VerifierBehavior> out(n, VerifierBehavior::Honest);
    for (auto i : ids) out[i] = b;
    return out;
}

}  // namespace

TEST(Pipeline, HonestRunExecutes) {
    Federation f(3);
    auto o = run_one(f, user("alice"));
    ASSERT_TRUE(o.tx);
    EXPECT_EQ(o.attempts, 1u);
    auto v = settle(f, *o.tx);
    EXPECT_TRUE(v.executes()) << v.detail;
    EXPECT_EQ(v.ell, *o.ell);
    EXPECT_EQ(v.block_curr, 100u);
    for (auto& vs : f.d.verifiers) {
        EXPECT_TRUE(vs.issued_list_D.contains(*o.ell));
        EXPECT_TRUE(vs.used_list_U.contains(*o.ell));
    }
}

TEST(Pipeline, ManyUsersGetDistinctChallenges) {
    Federation f(5);
    std::vector<UserSpec> us{user("a"), user("b"), user("c"), user("d")};
    PipelineOptions o;
    o.block_clock = f.clock();
    auto out = run_pipeline(f.d, us, o);
    std::set<mpz_class> ells;
    for (auto& s : out) {
        ASSERT_TRUE(s.tx);
        EXPECT_TRUE(settle(f, *s.tx).executes());
        ells.insert(*s.ell);
    }
    EXPECT_EQ(ells.size(), 4u);
}

TEST(Pipeline, ScheduleIndependentOutcome) {
    std::vector<UserSpec> us{user("a"), user("b"), user("c")};
    auto run = [&](Schedule s, std::uint64_t route_seed) {
        Federation f(5);
        PipelineOptions o;
        o.schedule = s;
        o.seed = 42;
        o.block_clock = f.clock();
        o.verifier_behaviors = with_byzantine(5, {1, 3}, VerifierBehavior::GarbageSign);
        o.interleave_seed = route_seed;
        std::vector<Bytes> txs;
        for (auto& r : run_pipeline(f.d, us, o)) txs.push_back(r.tx ? r.tx->encode() : Bytes{});
        return txs;
    };
    auto reference = run(Schedule::Deterministic, 0);
    for (auto& t : reference) EXPECT_FALSE(t.empty());
    for (std::uint64_t s = 1; s <= 5; ++s) EXPECT_EQ(run(Schedule::Deterministic, s), reference);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(run(Schedule::Threaded, 0), reference);
}


TEST(Pipeline, NoPreimageBeforeReveal) {
    Federation f(3);
    Transcript t;
    PipelineOptions o;
    o.transcript = &t;
    auto u = user("privacy");
    auto out = run_one(f, u, o);
    ASSERT_TRUE(out.tx);
    ASSERT_GT(t.size(), 0u);
    auto h = out.tx->details.digest();
    bool saw_h = false;
    for (const auto& r : t.records()) {
        EXPECT_FALSE(contains(r.payload, std::string_view(u.addr))) << r.kind;
        EXPECT_FALSE(contains(r.payload, std::string_view(u.function_name))) << r.kind;
        EXPECT_FALSE(contains(r.payload, out.tx->details.encode())) << r.kind;
        saw_h = saw_h || contains(r.payload, h);
    }
    EXPECT_TRUE(saw_h);
}

TEST(Pipeline, TranscriptJsonLines) {
    Federation f(3);
    Transcript t;
    PipelineOptions o;
    o.transcript = &t;
    run_one(f, user("log"), o);
    std::ostringstream os;
    t.write_jsonl(os);
    std::istringstream is(os.str());
    std::string line;
    std::uint64_t expect_seq = 0;
    std::set<std::string> kinds;
    while (std::getline(is, line)) {
        auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j.at("seq").get<std::uint64_t>(), expect_seq++);
        EXPECT_EQ(j.at("payload_sha256").get<std::string>().size(), 64u);
        EXPECT_FALSE(j.contains("payload"));
        kinds.insert(j.at("kind").get<std::string>());
    }
    EXPECT_EQ(expect_seq, t.size());
    // 3 intents, 3 challenges, 3 replies, bundle, 3 proofs, 3 replies, bundle
    EXPECT_EQ(t.size(), 17u);
    EXPECT_EQ(kinds.size(), 7u);
}

TEST(Pipeline, RetriesThenAborts) {
    Federation f(3);
    PipelineOptions o;
    o.verifier_behaviors = with_byzantine(3, {1, 2}, VerifierBehavior::Drop);
    auto out = run_one(f, user("unlucky"), o);
    EXPECT_FALSE(out.tx);
    EXPECT_EQ(out.attempts, 4u);
    ASSERT_FALSE(out.events.empty());
    EXPECT_EQ(out.events.back(), "giving up after 4 attempts");

    o.max_retries = 0;
    EXPECT_EQ(run_one(f, user("impatient"), o).attempts, 1u);
}

// Case 0: everyone honest.
TEST(CorruptionCases, Case0AllHonest) {
    Federation f(3);
    auto o = run_one(f, user("alice"));
    ASSERT_TRUE(o.tx);
    EXPECT_TRUE(settle(f, *o.tx).executes());
}

// Case 1: honest user and coordinator, a minority of verifiers corrupt.
TEST(CorruptionCases, Case1MinorityVerifiersCorrupt) {
    for (auto b : {VerifierBehavior::Drop, VerifierBehavior::GarbageSign, VerifierBehavior::ReplayEll,
                   VerifierBehavior::FalseAccept}) {
        Federation f(5);
        PipelineOptions o;
        o.verifier_behaviors = with_byzantine(5, {2, 4}, b);
        auto out = run_one(f, user("alice"), o);
        ASSERT_TRUE(out.tx) << to_string(b);
        EXPECT_TRUE(settle(f, *out.tx).executes()) << to_string(b);
    }
}

// Case 2: honest user and verifiers, corrupt coordinator.
TEST(CorruptionCases, Case2CorruptCoordinator) {
    for (auto c : {CoordinatorBehavior::NonPrimeEll, CoordinatorBehavior::GarbageAggregate,
                   CoordinatorBehavior::ShortBundle}) {
        Federation f(3);
        PipelineOptions o;
        o.coordinator = c;
        auto out = run_one(f, user("alice"), o);
        EXPECT_FALSE(out.tx);
        EXPECT_EQ(out.attempts, 4u);
    }

    Federation f(3);
    PipelineOptions o;
    o.coordinator = CoordinatorBehavior::ReplayEll;
    o.block_clock = f.clock();
    std::vector<UserSpec> us{user("first"), user("second")};
    auto out = run_pipeline(f.d, us, o);
    ASSERT_TRUE(out[0].tx);
    EXPECT_TRUE(settle(f, *out[0].tx).executes());
    EXPECT_FALSE(out[1].tx);
    bool saw_bottom = false;
    for (auto& e : out[1].events) saw_bottom = saw_bottom || e.find("bottom") != std::string::npos;
    EXPECT_TRUE(saw_bottom);
}

// Case 3: honest user, corrupt coordinator colluding with a minority.
TEST(CorruptionCases, Case3CoordinatorWithMinority) {
    for (auto c : {CoordinatorBehavior::NonPrimeEll, CoordinatorBehavior::ShortBundle,
                   CoordinatorBehavior::GarbageAggregate}) {
        Federation f(5);
        PipelineOptions o;
        o.coordinator = c;
        o.verifier_behaviors = with_byzantine(5, {0, 3}, VerifierBehavior::FalseAccept);
        auto out = run_one(f, user("alice"), o);
        EXPECT_FALSE(out.tx);
    }
}

// Case 4: corrupt user, everyone else honest.
TEST(CorruptionCases, Case4CorruptUser) {
    {
        Federation f(3);
        auto out = run_one(f, user("mallory", UserBehavior::BadIntentSig));
        EXPECT_FALSE(out.tx);
        EXPECT_NE(out.events.front().find("BadUserSignature"), std::string::npos);
        for (auto& v : f.d.verifiers) EXPECT_TRUE(v.issued_list_D.empty());
    }
    {
        Federation f(3);
        auto out = run_one(f, user("mallory", UserBehavior::BadProof));
        EXPECT_FALSE(out.tx);
        for (auto& v : f.d.verifiers) EXPECT_EQ(v.used_list_U.size(), out.attempts);
    }
    {
        Federation f(3);
        auto out = run_one(f, user("mallory", UserBehavior::AlteredMA));
        ASSERT_TRUE(out.tx);
        EXPECT_EQ(settle(f, *out.tx).reason, RejectReason::HashMismatch);
    }
}

// Case 5: corrupt user with a corrupt minority.
TEST(CorruptionCases, Case5UserWithMinority) {
    {
        Federation f(5);
        PipelineOptions o;
        o.verifier_behaviors = with_byzantine(5, {1, 2}, VerifierBehavior::FalseAccept);
        auto out = run_one(f, user("mallory", UserBehavior::BadProof), o);
        EXPECT_FALSE(out.tx);
    }
    {
        Federation f(5);
        PipelineOptions o;
        o.verifier_behaviors = with_byzantine(5, {1, 2}, VerifierBehavior::FalseAccept);
        auto out = run_one(f, user("mallory", UserBehavior::AlteredMA), o);
        ASSERT_TRUE(out.tx);
        EXPECT_EQ(settle(f, *out.tx).reason, RejectReason::HashMismatch);
    }
}

// Case 6: corrupt user and coordinator, honest verifiers.
TEST(CorruptionCases, Case6UserAndCoordinator) {
    for (auto ub : {UserBehavior::BadIntentSig, UserBehavior::BadProof, UserBehavior::AlteredMA}) {
        for (auto c : {CoordinatorBehavior::NonPrimeEll, CoordinatorBehavior::GarbageAggregate}) {
            Federation f(3);
            PipelineOptions o;
            o.coordinator = c;
            auto out = run_one(f, user("mallory", ub), o);
            if (out.tx) EXPECT_FALSE(settle(f, *out.tx).executes());
        }
    }
}

// Case 7: corrupt user, coordinator and a minority of verifiers.
TEST(CorruptionCases, Case7EveryoneButHonestMajority) {
    for (auto ub : {UserBehavior::BadIntentSig, UserBehavior::BadProof, UserBehavior::AlteredMA}) {
        for (auto c : {CoordinatorBehavior::ShortBundle, CoordinatorBehavior::ReplayEll}) {
            Federation f(5);
            PipelineOptions o;
            o.coordinator = c;
            o.verifier_behaviors = with_byzantine(5, {0, 4}, VerifierBehavior::FalseAccept);
            auto out = run_one(f, user("mallory", ub), o);
            if (out.tx) EXPECT_FALSE(settle(f, *out.tx).executes());
        }
    }
}

TEST(Pipeline, MajorityWithholdingYieldsBottom) {
    Federation f(5);
    PipelineOptions o;
    o.max_retries = 0;
    o.verifier_behaviors = with_byzantine(5, {0, 1, 2}, VerifierBehavior::Drop);
    auto out = run_one(f, user("alice"), o);
    EXPECT_FALSE(out.tx);
    ASSERT_FALSE(out.events.empty());
    EXPECT_NE(out.events.front().find("NoMajority"), std::string::npos);
}

TEST(Pipeline, EpochRotationClearsState) {
    Federation f(3);
    auto first = run_one(f, user("a"));
    ASSERT_TRUE(first.tx);
    Drbg rng(9, "rotate");
    EpochConstraints c;
    c.param_gen.share_bits = 160;
    epoch_rotate(f.d, 48, c, rng);
    auto second = run_one(f, user("b"));
    ASSERT_TRUE(second.tx);
    EXPECT_TRUE(settle(f, *second.tx).executes());
    for (auto& v : f.d.verifiers) {
        EXPECT_FALSE(v.issued_list_D.contains(*first.ell));
        EXPECT_EQ(v.issued_list_D.size(), 1u);
    }
}

TEST(Pipeline, ChallengeBacksAtMostOneExecution) {
    Federation f(3);
    FirstContract contract(f.d.contract);
    PipelineOptions o;
    o.coordinator = CoordinatorBehavior::ReplayEll;
    o.block_clock = f.clock();
    std::vector<UserSpec> us{user("a"), user("b"), user("c")};
    auto out = run_pipeline(f.d, us, o);
    std::set<mpz_class> executed;
    for (auto& s : out) {
        if (!s.tx) continue;
        auto v = contract.execute(*s.tx, f.chain.height() + 1);
        if (v.executes()) EXPECT_TRUE(executed.insert(v.ell).second);
    }
    EXPECT_EQ(contract.executed(), executed.size());
    ASSERT_TRUE(out[0].tx);
    EXPECT_EQ(contract.execute(*out[0].tx, f.chain.height() + 1).reason, RejectReason::ChallengeReused);
}
