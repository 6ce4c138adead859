#include <gtest/gtest.h>

#include <gmpxx.h>

#include <nlohmann/json.hpp>

#include "../support/cli_runner.hpp"

using namespace first::testing;
namespace fs = std::filesystem;

namespace {

const std::string kData = FIRST_TEST_DATA_DIR;
const std::string kConfigs = FIRST_CONFIG_DIR;

// Runs `args` twice into separate out-dirs and compares stdout and files.
void expect_deterministic(const std::string& name, const std::string& args) {
    auto a = scratch(name + "-a"), b = scratch(name + "-b");
    auto ra = run_cli("--seed 11 --out-dir " + a.string() + " " + args);
    auto rb = run_cli("--seed 11 --out-dir " + b.string() + " " + args);
    ASSERT_EQ(ra.exit_code, 0) << args;
    ASSERT_EQ(rb.exit_code, 0) << args;
    EXPECT_EQ(ra.out, rb.out) << args;
    auto ta = tree(a), tb = tree(b);
    EXPECT_FALSE(ta.empty()) << args;
    EXPECT_EQ(ta, tb) << args;
}

}  // namespace

TEST(Cli, SetupEmitsOddModulus) {
    auto dir = scratch("setup");
    auto r = run_cli("--seed 1 --out-dir " + dir.string() + " setup --verifiers 3 --T 64");
    ASSERT_EQ(r.exit_code, 0);
    auto pp = nlohmann::json::parse(slurp(dir / "pp.json"));
    mpz_class n(pp["modulus_N"].get<std::string>().substr(2), 16);
    EXPECT_TRUE(mpz_odd_p(n.get_mpz_t()));
    EXPECT_EQ(pp["verifiers"].size(), 3u);
    EXPECT_EQ(pp["sigma_pp"].size(), 3u);
}

TEST(Cli, SetupEvenVerifiersIsDomainError) {
    auto dir = scratch("even");
    auto r = run_cli("--out-dir " + dir.string() + " setup --verifiers 4");
    EXPECT_EQ(r.exit_code, 1);
    auto with_err = run_cli("--out-dir " + dir.string() + " setup --verifiers 4", true);
    EXPECT_NE(with_err.out.find("EvenVerifierCount"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run_cli("").exit_code, 2);
    EXPECT_EQ(run_cli("vdf").exit_code, 2);
    EXPECT_EQ(run_cli("setup --verifiers notanumber").exit_code, 2);
    EXPECT_EQ(run_cli("analyze recommend --trace x").exit_code, 2);
    EXPECT_EQ(run_cli("--help").exit_code, 0);
}

TEST(Cli, VdfEvalVerifyRoundTrip) {
    auto dir = scratch("vdf");
    ASSERT_EQ(run_cli("--out-dir " + dir.string() + " vdf eval --modulus 3173 --T 300 --k 4 --x 2").exit_code, 0);
    EXPECT_EQ(run_cli("vdf verify --proof " + (dir / "proof.json").string()).exit_code, 0);

    auto proof = nlohmann::ordered_json::parse(slurp(dir / "proof.json"));
    mpz_class y(proof["y"].get<std::string>().substr(2), 16);
    y = (y + 1) % 3173;
    proof["y"] = "0x" + y.get_str(16);
    std::ofstream(dir / "tampered.json") << proof.dump();
    EXPECT_EQ(run_cli("vdf verify --proof " + (dir / "tampered.json").string()).exit_code, 1);
}

TEST(Cli, VdfBenchTimesFitLine) {
    auto dir = scratch("bench");
    ASSERT_EQ(run_cli("--out-dir " + dir.string() + " vdf bench --T-grid 65536,131072,262144,524288").exit_code, 0);
    // oracle: redo the regression from the CSV
    std::istringstream in(slurp(dir / "bench.csv"));
    std::string line;
    std::getline(in, line);
    std::vector<double> t, s;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string a, b;
        std::getline(ls, a, ',');
        std::getline(ls, b, ',');
        t.push_back(std::stod(a));
        s.push_back(std::stod(b));
    }
    ASSERT_EQ(t.size(), 4u);
    const double n = 4, mt = (t[0] + t[1] + t[2] + t[3]) / n, ms = (s[0] + s[1] + s[2] + s[3]) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < 4; ++i) {
        sxy += (t[i] - mt) * (s[i] - ms);
        sxx += (t[i] - mt) * (t[i] - mt);
        syy += (s[i] - ms) * (s[i] - ms);
    }
    EXPECT_GE(sxy * sxy / (sxx * syy), 0.99);
}

TEST(Cli, SimulationScenarios) {
    auto dir = scratch("sim");
    auto none = run_cli("--out-dir " + dir.string() + " sim run --config " + kConfigs + "/sim_none.json");
    ASSERT_EQ(none.exit_code, 0);
    auto report = nlohmann::json::parse(slurp(dir / "sim_report.json"));
    EXPECT_EQ(report["frontrun_rate"].get<double>(), 0.0);

    auto reactive = run_cli("--out-dir " + dir.string() + " sim run --config " + kConfigs + "/sim_reactive.json");
    ASSERT_EQ(reactive.exit_code, 0);
    report = nlohmann::json::parse(slurp(dir / "sim_report.json"));
    ASSERT_GT(report["t1_s"].get<double>(), report["max_victim_wait_s"].get<double>());
    EXPECT_EQ(report["frontrun_rate"].get<double>(), 0.0);

    std::ofstream(dir / "bad.json") << R"({"schema":"simconfig/1","duration_s":-1})";
    EXPECT_EQ(run_cli("sim run --config " + (dir / "bad.json").string()).exit_code, 1);
}

TEST(Cli, SimulationTranscript) {
    auto dir = scratch("transcript");
    auto log = dir / "t.jsonl";
    ASSERT_EQ(run_cli("--out-dir " + dir.string() + " --transcript " + log.string() + " sim run --config " + kConfigs +
                      "/sim_none.json")
                  .exit_code,
              0);
    std::istringstream in(slurp(log));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        EXPECT_TRUE(j.contains("kind"));
        ++n;
    }
    EXPECT_GT(n, 0u);
}

TEST(Cli, AnalyzeFixture) {
    auto dir = scratch("analyze");
    auto r = run_cli("--out-dir " + dir.string() + " analyze grid --trace " + kData +
                     "/fixture_5rows.csv --tips 20 --delays 500");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(slurp(dir / "grid.csv"), "tip_pct,vdf_delay_s,count,total,probability\n20.000000,500.000000,1,5,0.200000\n");

    std::ofstream(dir / "missing.csv") << "block_number,tx_id,base_fee_wei,miner_tip_wei,gas_price_wei\n1,a,1,1,2\n";
    auto bad = run_cli("analyze grid --trace " + (dir / "missing.csv").string(), true);
    EXPECT_NE(bad.out.find("SchemaMismatch"), std::string::npos);
    EXPECT_EQ(run_cli("analyze grid --trace " + (dir / "missing.csv").string()).exit_code, 1);

    ASSERT_EQ(run_cli("--out-dir " + dir.string() + " analyze recommend --trace " + kData +
                      "/fixture_5rows.csv --target 1.0 --tips 5,10,20 --delays 100,500")
                  .exit_code,
              0);
    auto rec = nlohmann::json::parse(slurp(dir / "recommendation.json"));
    EXPECT_EQ(rec["tip_pct"], "5.000000");
    EXPECT_EQ(rec["vdf_delay_s"], "100.000000");
}

TEST(Cli, SeededRunsAreByteIdentical) {
    expect_deterministic("keygen", "keygen --count 3");
    expect_deterministic("setup", "setup --verifiers 3 --T 64");
    expect_deterministic("eval", "vdf eval --modulus 3173 --T 300 --k 4");
    expect_deterministic("sim", "sim run --config " + kConfigs + "/sim_reactive.json");
    expect_deterministic("grid", "analyze grid --trace " + kData + "/fixture_5rows.csv");
    expect_deterministic("recommend", "analyze recommend --trace " + kData + "/fixture_5rows.csv --target 0.2");

    auto a = scratch("bench-a"), b = scratch("bench-b");
    ASSERT_EQ(run_cli("--seed 11 --out-dir " + a.string() + " vdf bench --T-grid 1024,2048").exit_code, 0);
    ASSERT_EQ(run_cli("--seed 11 --out-dir " + b.string() + " vdf bench --T-grid 1024,2048").exit_code, 0);
    EXPECT_EQ(bench_without_timing(slurp(a / "bench.csv")), bench_without_timing(slurp(b / "bench.csv")));
    EXPECT_EQ(nlohmann::json::parse(slurp(a / "bench.json"))["modulus_N"],
              nlohmann::json::parse(slurp(b / "bench.json"))["modulus_N"]);
}
