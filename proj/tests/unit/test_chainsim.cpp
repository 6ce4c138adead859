#include <gtest/gtest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>

#include "first/chain/fee.hpp"
#include "first/chain/sim_io.hpp"
#include "first/chain/simulation.hpp"
#include "first/common/error.hpp"

using namespace first;

namespace {

std::string reason_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return std::string(e.reason());
    }
    return "none";
}

MempoolEntry entry(std::string id, std::uint64_t tip, double t, std::uint64_t gas = 21000) {
    MempoolEntry e;
    e.id = std::move(id);
    e.tip = tip;
    e.submit_time = t;
    e.gas = gas;
    e.hash = sha256(as_bytes(e.id));
    return e;
}

std::vector<std::string> ids(const std::vector<MempoolEntry>& es) {
    std::vector<std::string> out;
    for (auto& e : es) out.push_back(e.id);
    return out;
}

SimConfig quick(AdversaryStrategy s, double seconds_per_step, std::uint64_t seed = 1) {
    SimConfig c;
    c.seed = seed;
    c.adversary_strategy = s;
    c.vdf_seconds_per_step = seconds_per_step;
    c.difficulty_T = 1'000'000;
    c.duration_s = 600;
    c.victim_count = 8;
    return c;
}

}  // namespace

TEST(BaseFee, Equilibrium) { EXPECT_EQ(base_fee_update(1'000'000'000, 15'000'000, 15'000'000), 1'000'000'000u); }

TEST(BaseFee, MatchesDirectFormula) {
    // oracle: exact rational evaluation of parent * (1 + (used - target) / (8 * target)), floored
    using boost::multiprecision::cpp_rational;
    for (std::uint64_t parent : {1ull, 7ull, 100ull, 1'000'000'000ull, 123'456'789'012ull}) {
        for (std::uint64_t used : {0ull, 1ull, 7'500'000ull, 15'000'000ull, 22'000'000ull, 30'000'000ull}) {
            const std::uint64_t target = 15'000'000;
            cpp_rational exact = cpp_rational(parent) * (cpp_rational(8 * target) + used - cpp_rational(target)) /
                                 cpp_rational(8 * target);
            auto floor = boost::multiprecision::cpp_int(numerator(exact) / denominator(exact));
            if (floor < 1) floor = 1;
            // the floor of each division step matches the exact floor within one unit
            auto got = base_fee_update(parent, used, target);
            auto diff = boost::multiprecision::abs(boost::multiprecision::cpp_int(got) - floor);
            EXPECT_LE(diff, 1) << parent << " " << used;
        }
    }
    EXPECT_EQ(base_fee_update(800, 30'000'000, 15'000'000), 900u);
    EXPECT_EQ(base_fee_update(800, 0, 15'000'000), 700u);
    EXPECT_EQ(base_fee_update(1, 0, 15'000'000), 1u);
}

TEST(Mempool, TipDescending) {
    std::vector<MempoolEntry> pool{entry("a", 3, 0), entry("b", 9, 1), entry("c", 5, 2)};
    EXPECT_EQ(ids(mine_block(pool, 1'000'000, 10)), (std::vector<std::string>{"b", "c", "a"}));
    EXPECT_TRUE(pool.empty());
}

TEST(Mempool, EqualTipsEarlierFirstThenHash) {
    std::vector<MempoolEntry> pool{entry("late", 5, 2), entry("early", 5, 1)};
    EXPECT_EQ(ids(mine_block(pool, 1'000'000, 10)), (std::vector<std::string>{"early", "late"}));
    std::vector<MempoolEntry> tie{entry("x", 5, 1), entry("y", 5, 1)};
    auto first = mines_before(tie[0], tie[1]) ? "x" : "y";
    EXPECT_EQ(mine_block(tie, 1'000'000, 10).front().id, first);
}

TEST(Mempool, GasLimitDefersSuffix) {
    std::vector<MempoolEntry> pool;
    const std::vector<std::uint64_t> gas{40, 30, 50, 10, 20};
    for (std::size_t i = 0; i < gas.size(); ++i) pool.push_back(entry("t" + std::to_string(i), 100 - i, 0, gas[i]));
    // oracle: replay the order, stopping at the first that overflows 100
    std::vector<std::string> expect;
    std::uint64_t used = 0;
    for (std::size_t i = 0; i < gas.size(); ++i) {
        if (used + gas[i] > 100) break;
        used += gas[i];
        expect.push_back("t" + std::to_string(i));
    }
    EXPECT_EQ(ids(mine_block(pool, 100, 10)), expect);
    EXPECT_EQ(ids(pool), (std::vector<std::string>{"t2", "t3", "t4"}));
    EXPECT_EQ(ids(mine_block(pool, 100, 2)), (std::vector<std::string>{"t2", "t3"}));
}

TEST(Mempool, OrderIgnoresPayload) {
    auto a = entry("a", 5, 1);
    auto b = a;
    b.kind = TxKind::Victim;
    b.gas = 99;
    EXPECT_FALSE(mines_before(a, b));
    EXPECT_FALSE(mines_before(b, a));
}

TEST(SimConfigIo, RoundTripAndErrors) {
    SimConfig c;
    c.seed = 9;
    c.adversary_strategy = AdversaryStrategy::OfflinePrecompute;
    c.tip_distribution = {TipDistribution::Kind::Normal, 15, 4};
    auto text = dump_sim_config(c);
    EXPECT_EQ(dump_sim_config(parse_sim_config(text)), text);

    EXPECT_EQ(reason_of([] { parse_sim_config("{}"); }), "ConfigInvalid");
    EXPECT_EQ(reason_of([] { parse_sim_config("not json"); }), "ConfigInvalid");
    EXPECT_EQ(reason_of([] { parse_sim_config(R"({"schema":"simconfig/1","block_interval_s":0})"); }), "ConfigInvalid");
    EXPECT_EQ(reason_of([] { parse_sim_config(R"({"schema":"simconfig/1","seed":-1})"); }), "ConfigInvalid");
    EXPECT_EQ(reason_of([] { parse_sim_config(R"({"schema":"simconfig/1","typo":1})"); }), "ConfigInvalid");
    EXPECT_EQ(reason_of([] { parse_sim_config(R"({"schema":"simconfig/1","adversary_strategy":"x"})"); }),
              "ConfigInvalid");
    EXPECT_EQ(reason_of([] { parse_sim_config(R"({"schema":"simconfig/1","verifier_count":4})"); }), "ConfigInvalid");
    auto minimal = parse_sim_config(R"({"schema":"simconfig/1","seed":5})");
    EXPECT_EQ(minimal.seed, 5u);
    EXPECT_EQ(minimal.block_qty, SimConfig{}.block_qty);
}

TEST(Simulation, DeterministicReports) {
    auto c = quick(AdversaryStrategy::Reactive, 1e-5);
    auto a = run_simulation(c);
    auto b = run_simulation(c);
    EXPECT_EQ(report_csv(a), report_csv(b));
    EXPECT_EQ(report_json(a), report_json(b));
    c.seed = 2;
    EXPECT_NE(report_csv(run_simulation(c)), report_csv(a));
}

TEST(Simulation, NoAdversaryNoFrontrun) {
    auto r = run_simulation(quick(AdversaryStrategy::None, 1e-5));
    EXPECT_EQ(r.frontrun_rate, 0.0);
    EXPECT_EQ(r.adversary_submitted, 0u);
    EXPECT_EQ(r.victims, 8u);
}

TEST(Simulation, ConservationAndHonestVictimsExecute) {
    auto r = run_simulation(quick(AdversaryStrategy::Reactive, 1e-5));
    EXPECT_EQ(r.confirmed + r.rejected + r.pending, r.submitted);
    EXPECT_EQ(r.submitted, r.txs.size());
    for (auto& t : r.txs) {
        if (t.kind == TxKind::Victim && t.status != TxStatus::Pending) EXPECT_EQ(t.status, TxStatus::Confirmed) << t.reject_reason;
        if (t.status != TxStatus::Pending) EXPECT_DOUBLE_EQ(t.waited_s, *t.confirm_s - t.submit_s);
    }
}

TEST(Simulation, ReactiveLosesWhenDelayExceedsWaits) {
    auto r = run_simulation(quick(AdversaryStrategy::Reactive, 3e-5));
    ASSERT_GT(r.t1_s, r.max_victim_wait_s);
    EXPECT_EQ(r.frontrun_rate, 0.0);
}

TEST(Simulation, ZeroDelayReactiveFrontruns) {
    auto r = run_simulation(quick(AdversaryStrategy::Reactive, 0));
    // oracle: replay the event order per victim
    std::uint64_t count = 0;
    for (auto& v : r.txs) {
        if (v.kind != TxKind::Victim) continue;
        bool beaten = false;
        for (auto& a : r.txs) {
            if (a.kind != TxKind::Adversary || a.status != TxStatus::Confirmed) continue;
            if (*a.target != std::stoul(v.id.substr(7))) continue;
            beaten = !v.block || std::pair(*a.block, *a.position) < std::pair(*v.block, *v.position);
        }
        EXPECT_EQ(beaten, v.frontrun) << v.id;
        count += beaten;
    }
    EXPECT_EQ(count, r.frontrun_count);
    EXPECT_GT(r.frontrun_rate, 0.5);
}

TEST(Simulation, OfflinePrecomputeGoesStale) {
    auto c = quick(AdversaryStrategy::OfflinePrecompute, 1e-5);
    c.freshness_threshold = 5;
    auto r = run_simulation(c);
    EXPECT_EQ(r.frontrun_rate, 0.0);
    EXPECT_GT(r.adversary_submitted, 0u);
    std::uint64_t included = 0;
    for (auto& t : r.txs)
        if (t.kind == TxKind::Adversary && t.status != TxStatus::Pending) {
            ++included;
            EXPECT_EQ(t.reject_reason, "Stale");
        }
    EXPECT_EQ(r.adversary_stale, included);
}

TEST(Simulation, RateNonIncreasingInDelay) {
    // t1 in {0, t2/2, 2 t2} with t2 one block interval
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        std::vector<double> rates;
        for (double t1 : {0.0, 6.0, 24.0}) {
            auto c = quick(AdversaryStrategy::Reactive, t1 / 1e6, seed);
            rates.push_back(run_simulation(c).frontrun_rate);
        }
        EXPECT_GE(rates[0], rates[1]) << seed;
        EXPECT_GE(rates[1], rates[2]) << seed;
    }
}
