#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "../support/trace_oracle.hpp"
#include "first/analytics/frontrun.hpp"
#include "first/common/error.hpp"

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

const std::string kFixture = std::string(FIRST_TEST_DATA_DIR) + "/fixture_5rows.csv";

std::vector<TraceRecord> fixture() { return ingest_trace(kFixture, IngestMode::Strict).records; }

Micro m(std::string_view s) { return parse_micro(s); }

cpp_rational as_rational(const Probability& p) { return cpp_rational(cpp_int(p.count), cpp_int(p.total)); }

}  // namespace

TEST(Micro, ParseAndFormat) {
    EXPECT_EQ(m("20").v, 20'000'000);
    EXPECT_EQ(m("0.5").v, 500'000);
    EXPECT_EQ(m(".25").v, 250'000);
    EXPECT_EQ(m("-1.000001").v, -1'000'001);
    EXPECT_EQ(format_micro(m("2000")), "2000.000000");
    EXPECT_EQ(format_micro(Micro{-5}), "-0.000005");
    for (auto bad : {"", ".", "1.2345678", "1e3", "abc", "1,5"}) EXPECT_EQ(reason_of([&] { m(bad); }), "BadNumber") << bad;
}

TEST(Ingest, FiveRowFixture) {
    auto t = ingest_trace(kFixture, IngestMode::Strict);
    EXPECT_EQ(t.records.size(), 5u);
    EXPECT_TRUE(t.skipped.empty());
    EXPECT_EQ(t.records[2].tx_id, "0xa3");
    EXPECT_EQ(t.records[2].wait_seconds, micro_from_int(2500));
}

TEST(Ingest, ZeroBaseFeeSkippedInLenientMode) {
    std::string csv = std::string(kTraceHeader) + "\n1,a,100,5,105,10\n2,b,0,5,5,10\n3,c,100,5,105,-1\n4,d,100,5\n";
    std::istringstream lenient(csv);
    auto t = ingest_trace(lenient, IngestMode::Lenient);
    EXPECT_EQ(t.records.size(), 1u);
    ASSERT_EQ(t.skipped.size(), 3u);
    EXPECT_EQ(t.skipped[0].line, 3u);
    EXPECT_NE(t.skipped[0].reason.find("base_fee"), std::string::npos);
    EXPECT_EQ(t.skipped[2].line, 5u);

    std::istringstream strict(csv);
    EXPECT_EQ(reason_of([&] { ingest_trace(strict, IngestMode::Strict); }), "MalformedRow");
}

TEST(Ingest, SchemaAndEmptiness) {
    std::istringstream missing("block_number,tx_id,base_fee_wei,miner_tip_wei,gas_price_wei\n1,a,1,1,2\n");
    EXPECT_EQ(reason_of([&] { ingest_trace(missing, IngestMode::Strict); }), "SchemaMismatch");
    std::istringstream header_only(std::string(kTraceHeader) + "\n");
    EXPECT_EQ(reason_of([&] { ingest_trace(header_only, IngestMode::Lenient); }), "EmptyTrace");
    std::istringstream nothing("");
    EXPECT_EQ(reason_of([&] { ingest_trace(nothing, IngestMode::Lenient); }), "EmptyTrace");
    std::istringstream crlf(std::string(kTraceHeader) + "\r\n1,a,100,5,105,10\r\n");
    EXPECT_EQ(ingest_trace(crlf, IngestMode::Strict).records.size(), 1u);
}

TEST(FrontrunProbability, FixtureCell) {
    auto rs = fixture();
    auto p = frontrun_probability(rs, m("20"), m("500"));
    EXPECT_EQ(p.count, 1u);
    EXPECT_EQ(p.total, 5u);
    EXPECT_EQ(p.exact(), mpq_class(1, 5));
    // oracle: enumerate the five rows by hand
    const int tips[] = {5, 10, 25, 30, 25};
    const int waits[] = {600, 100, 2500, 300, 50};
    int hits = 0;
    for (int i = 0; i < 5; ++i) hits += tips[i] >= 20 && waits[i] >= 500;
    EXPECT_EQ(p.count, static_cast<std::uint64_t>(hits));
    EXPECT_EQ(as_rational(p), brute_force(rs, m("20"), m("500")));
}

TEST(FrontrunProbability, DegenerateBracketsCountEverything) {
    auto rs = fixture();
    EXPECT_EQ(frontrun_probability(rs, m("0"), m("0")).value(), 1.0);
    EXPECT_EQ(reason_of([] { frontrun_probability({}, Micro{}, Micro{}); }), "EmptyTrace");
}

TEST(FrontrunProbability, BoundaryUsesGreaterOrEqual) {
    auto rs = fixture();
    EXPECT_EQ(frontrun_probability(rs, m("25"), m("2500")).count, 1u);
    EXPECT_EQ(frontrun_probability(rs, m("25.000001"), m("0")).count, 1u);
    EXPECT_EQ(frontrun_probability(rs, m("30"), m("300")).count, 1u);
    EXPECT_EQ(frontrun_probability(rs, m("30"), m("300.000001")).count, 0u);
}

TEST(FrontrunProbability, MatchesBruteForceOnRandomTraces) {
    Drbg rng(11, "traces");
    for (int trial = 0; trial < 200; ++trial) {
        auto rs = random_trace(rng, 1 + rng.uniform(100));
        Micro tip{static_cast<std::int64_t>(rng.uniform(40)) * kMicro};
        Micro delay{static_cast<std::int64_t>(rng.uniform(3000)) * kMicro};
        EXPECT_EQ(as_rational(frontrun_probability(rs, tip, delay)), brute_force(rs, tip, delay));
    }
}

TEST(Grid, SingleCellMatchesDirectCall) {
    auto rs = fixture();
    auto g = grid_report(rs, {m("20")}, {m("500")});
    EXPECT_EQ(g.at(0, 0).count, frontrun_probability(rs, m("20"), m("500")).count);
    EXPECT_EQ(g.first_block, 13163075u);
    EXPECT_EQ(g.last_block, 13163079u);
    EXPECT_EQ(grid_csv(g), "tip_pct,vdf_delay_s,count,total,probability\n20.000000,500.000000,1,5,0.200000\n");
    EXPECT_EQ(reason_of([&] { grid_report(rs, {}, {m("1")}); }), "EmptyGrid");
}

TEST(Grid, MonotoneAlongBothAxes) {
    Drbg rng(12, "monotone");
    auto rs = random_trace(rng, 500);
    auto g = grid_report(rs, parse_grid("0:25:1"), parse_grid("0,100,500,1000,2000,3000"));
    // oracle: pairwise comparison of neighbouring cells
    for (std::size_t t = 0; t < g.tip_pct.size(); ++t)
        for (std::size_t d = 0; d < g.vdf_delay_s.size(); ++d) {
            EXPECT_LE(g.at(t, d).value(), 1.0);
            if (t + 1 < g.tip_pct.size()) EXPECT_GE(g.at(t, d).count, g.at(t + 1, d).count);
            if (d + 1 < g.vdf_delay_s.size()) EXPECT_GE(g.at(t, d).count, g.at(t, d + 1).count);
        }
    EXPECT_EQ(g.at(0, 0).count, rs.size());
}

TEST(Grid, ParseGrid) {
    EXPECT_EQ(parse_grid("0:1:0.25").size(), 5u);
    EXPECT_EQ(parse_grid("5,10,20"), (std::vector<Micro>{m("5"), m("10"), m("20")}));
    EXPECT_EQ(reason_of([] { parse_grid("0:1"); }), "BadGrid");
    EXPECT_EQ(reason_of([] { parse_grid("1:0:1"); }), "BadGrid");
    EXPECT_EQ(reason_of([] { parse_grid("1,,2"); }), "BadNumber");
}

TEST(Recommend, TrivialTarget) {
    auto rs = fixture();
    auto r = recommend_epoch(rs, m("1"), {m("500"), m("100")}, {m("20"), m("5")});
    EXPECT_EQ(r.tip_pct, m("5"));
    EXPECT_EQ(r.vdf_delay_s, m("100"));
}

TEST(Recommend, PrefersSmallerDelayThenTip) {
    auto rs = fixture();
    // at delay 0 every row waited long enough, so only a tip above 25% leaves a single row
    auto r = recommend_epoch(rs, m("0.2"), {m("0"), m("100")}, parse_grid("0:30:1"));
    EXPECT_EQ(r.vdf_delay_s, m("0"));
    EXPECT_EQ(r.tip_pct, m("26"));
    EXPECT_EQ(r.probability.count, 1u);
}

TEST(Recommend, InfeasibleWhenSomeoneAlwaysWaits) {
    auto rs = fixture();
    // the 25% / 2500 s row counts at every grid point below
    EXPECT_EQ(reason_of([&] { recommend_epoch(rs, m("0"), {m("100"), m("2000")}, {m("0"), m("25")}); }),
              "Infeasible");
    // oracle: exhaustive scan agrees that no cell reaches zero
    for (auto d : {m("100"), m("2000")})
        for (auto t : {m("0"), m("25")}) EXPECT_GT(brute_force(rs, t, d), 0);
}
