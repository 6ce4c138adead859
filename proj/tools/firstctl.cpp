// firstctl: command-line driver for setup, VDF tooling, simulation and
// trace analytics. Exit codes: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "first/aggsig.hpp"
#include "first/analytics/frontrun.hpp"
#include "first/chain/ledger.hpp"
#include "first/chain/sim_io.hpp"
#include "first/common/bigint.hpp"
#include "first/common/stats.hpp"
#include "first/protocol/federation.hpp"
#include "first/vdf.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace first;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string transcript;
};

std::string hex(const mpz_class& n) { return "0x" + n.get_str(16); }

mpz_class integer(const std::string& text, const char* what) {
    mpz_class v;
    if (!parse_integer(text, v)) throw Error("BadNumber", std::string(what) + " '" + text + "' is not an integer");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IoError", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json read_json(const std::string& path) {
    try {
        return ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("BadInput", path + ": " + e.what());
    }
}

std::string get_string(const ordered_json& j, const char* key, const std::string& file) {
    if (!j.contains(key) || !j[key].is_string()) throw Error("BadInput", file + ": missing string field " + key);
    return j[key].get<std::string>();
}

void write_out(const Globals& g, const std::string& name, const std::string& content) {
    fs::create_directories(g.out_dir);
    const auto path = fs::path(g.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write " + path.string());
    out << content;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json keypair_json(const KeyPair& kp) {
    return {{"secret_key", to_hex(kp.secret_x.bytes)}, {"public_key", to_hex(kp.public_v.bytes)}};
}

// keygen ---------------------------------------------------------------

struct KeygenArgs {
    unsigned count = 1;
    std::string label = "user";
};

void cmd_keygen(const Globals& g, const KeygenArgs& a) {
    Drbg root(g.seed, "firstctl/keygen");
    ordered_json keys = ordered_json::array();
    for (unsigned i = 0; i < a.count; ++i) {
        Drbg rng = root.fork(a.label + "/" + std::to_string(i));
        auto kp = keygen(rng);
        auto k = keypair_json(kp);
        k["index"] = i;
        keys.push_back(k);
        std::cout << a.label << "/" << i << " " << to_hex(kp.public_v.bytes) << "\n";
    }
    write_out(g, "keys.json", dump({{"schema", "keys/1"}, {"label", a.label}, {"keys", keys}}));
}

// setup ----------------------------------------------------------------

struct SetupArgs {
    std::uint32_t verifiers = 3;
    std::uint64_t T = 1024;
    unsigned k = 64;
    unsigned share_bits = 0;
    std::uint64_t freshness = 5;
    std::string address = "0xf1257c0de";
};

void cmd_setup(const Globals& g, const SetupArgs& a) {
    if (a.T == 0) throw Error("InvalidDifficulty", "T must be positive");
    Chain chain;
    Drbg rng(g.seed, "firstctl/setup");
    auto s = system_setup(a.verifiers, a.k, rng, chain, a.address, a.freshness);
    ParamGenOptions o;
    o.share_bits = a.share_bits ? a.share_bits : 2 * a.k + 32;
    auto pg = param_gen(s.verifiers, a.T, 1, rng, o);

    ordered_json verifiers = ordered_json::array(), secrets = ordered_json::array();
    for (const auto& v : s.verifiers) {
        verifiers.push_back({{"id", v.id}, {"public_key", to_hex(v.keypair.public_v.bytes)}});
        auto k = keypair_json(v.keypair);
        k["id"] = v.id;
        secrets.push_back(k);
    }
    ordered_json sigs = ordered_json::array();
    for (const auto& sig : pg.sigma_pp) sigs.push_back(to_hex(sig.bytes));
    ordered_json pp{{"schema", "pp/1"},
                    {"epoch_id", pg.pp.epoch_id},
                    {"modulus_N", hex(pg.pp.vdf.modulus_N)},
                    {"modulus_construction", "sum of prime shares"},
                    {"difficulty_T", pg.pp.vdf.difficulty_T},
                    {"security_k", pg.pp.vdf.security_k},
                    {"contract_address", a.address},
                    {"freshness_threshold", a.freshness},
                    {"verifiers", verifiers},
                    {"sigma_pp", sigs},
                    {"restarts", pg.restarts},
                    {"events", pg.events}};
    write_out(g, "pp.json", dump(pp));
    write_out(g, "verifier_keys.json", dump({{"schema", "verifier-keys/1"}, {"verifiers", secrets}}));
    std::cout << "N = " << hex(pg.pp.vdf.modulus_N) << " (" << mpz_sizeinbase(pg.pp.vdf.modulus_N.get_mpz_t(), 2)
              << " bits), T = " << a.T << ", restarts = " << pg.restarts << "\n";
}

// vdf ------------------------------------------------------------------

struct VdfArgs {
    std::string pp_file;
    std::string modulus;
    std::uint64_t T = 1024;
    unsigned k = 64;
    std::string x;
    std::string out = "proof.json";
    std::string proof_file;
    std::string T_grid = "16384,32768,65536,131072,262144,524288";
};

VdfParams vdf_params(const VdfArgs& a) {
    if (!a.pp_file.empty()) {
        auto j = read_json(a.pp_file);
        if (!j.contains("difficulty_T") || !j.contains("security_k"))
            throw Error("BadInput", a.pp_file + ": not a pp file");
        return vdf_setup(j["security_k"].get<unsigned>(), from_u64(j["difficulty_T"].get<std::uint64_t>()),
                         integer(get_string(j, "modulus_N", a.pp_file), "modulus_N"));
    }
    if (a.modulus.empty()) throw Error("BadInput", "give --pp or --modulus");
    return vdf_setup(a.k, from_u64(a.T), integer(a.modulus, "modulus"));
}

mpz_class random_input(const VdfParams& p, Drbg& rng) {
    for (int tries = 0; tries < 1000; ++tries) {
        mpz_class x = from_bytes(rng.bytes((mpz_sizeinbase(p.modulus_N.get_mpz_t(), 2) + 7) / 8 + 8)) % p.modulus_N;
        if (x > 1 && vdf_element_ok(p, x)) return x;
    }
    throw Error("InputOutOfRange", "no admissible input found");
}

ordered_json proof_json(const VdfParams& p, const VdfProof& pr) {
    return {{"schema", "vdfproof/1"},          {"modulus_N", hex(p.modulus_N)},  {"difficulty_T", p.difficulty_T},
            {"security_k", p.security_k},      {"x", hex(pr.input_x)},           {"y", hex(pr.output_y)},
            {"pi", hex(pr.proof_pi)},          {"fs_prime", hex(pr.fs_challenge_prime)}};
}

void cmd_vdf_eval(const Globals& g, const VdfArgs& a) {
    auto p = vdf_params(a);
    Drbg rng(g.seed, "firstctl/vdf-eval");
    mpz_class x = a.x.empty() ? random_input(p, rng) : integer(a.x, "x");
    auto proof = vdf_eval(p, x);
    write_out(g, a.out, dump(proof_json(p, proof)));
    std::cout << "y = " << hex(proof.output_y) << "\n";
}

void cmd_vdf_verify(const VdfArgs& a) {
    auto j = read_json(a.proof_file);
    if (!j.contains("difficulty_T") || !j.contains("security_k"))
        throw Error("BadInput", a.proof_file + ": not a proof file");
    auto p = vdf_setup(j["security_k"].get<unsigned>(), from_u64(j["difficulty_T"].get<std::uint64_t>()),
                       integer(get_string(j, "modulus_N", a.proof_file), "modulus_N"));
    VdfProof pr{integer(get_string(j, "x", a.proof_file), "x"), integer(get_string(j, "y", a.proof_file), "y"),
                integer(get_string(j, "pi", a.proof_file), "pi"),
                integer(get_string(j, "fs_prime", a.proof_file), "fs_prime")};
    if (!vdf_verify(p, pr)) throw Error("ProofRejected", "proof does not verify");
    std::cout << "accept\n";
}

void cmd_vdf_bench(const Globals& g, const VdfArgs& a) {
    using clock = std::chrono::steady_clock;
    auto grid = parse_grid(a.T_grid);
    VdfParams base;
    Drbg rng(g.seed, "firstctl/vdf-bench");
    if (!a.modulus.empty() || !a.pp_file.empty()) {
        base = vdf_params(a);
    } else {
        Chain chain;
        auto s = system_setup(3, a.k, rng, chain, "0xbench");
        ParamGenOptions o;
        o.share_bits = 2 * a.k - 2;  // three shares sum to a modulus of about 2k bits
        base = param_gen(s.verifiers, 1, 1, rng, o).pp.vdf;
    }
    std::string csv = "T,eval_seconds,verify_seconds,verified\n";
    std::vector<double> ts, evals;
    double last_eval = 0, last_verify = 0;
    for (auto t : grid) {
        if (t.v <= 0 || t.v % kMicro != 0) throw Error("BadGrid", "T values must be positive integers");
        const auto T = static_cast<std::uint64_t>(t.v / kMicro);
        auto p = vdf_setup(base.security_k, from_u64(T), base.modulus_N);
        auto x = random_input(p, rng);
        auto t0 = clock::now();
        auto proof = vdf_eval(p, x);
        auto t1 = clock::now();
        bool ok = vdf_verify(p, proof);
        auto t2 = clock::now();
        last_eval = std::chrono::duration<double>(t1 - t0).count();
        last_verify = std::chrono::duration<double>(t2 - t1).count();
        ts.push_back(static_cast<double>(T));
        evals.push_back(last_eval);
        char row[128];
        std::snprintf(row, sizeof row, "%llu,%.6f,%.6f,%s\n", static_cast<unsigned long long>(T), last_eval,
                      last_verify, ok ? "true" : "false");
        csv += row;
        if (!ok) throw Error("ProofRejected", "bench proof failed at T = " + std::to_string(T));
    }
    ordered_json summary{{"schema", "vdfbench/1"}, {"modulus_N", hex(base.modulus_N)}, {"points", grid.size()}};
    if (ts.size() >= 2) {
        auto fit = linear_fit(ts, evals);
        summary["eval_fit"] = {{"slope_s_per_step", fit.slope}, {"intercept_s", fit.intercept}, {"r_squared", fit.r_squared}};
    }
    summary["verify_over_eval_at_max_T"] = last_eval > 0 ? last_verify / last_eval : 0.0;
    write_out(g, "bench.csv", csv);
    write_out(g, "bench.json", dump(summary));
    std::cout << csv;
}

// sim ------------------------------------------------------------------

struct SimArgs {
    std::string config;
    bool real_vdf = false;
};

void cmd_sim_run(const Globals& g, const SimArgs& a, bool seed_given) {
    auto c = parse_sim_config(read_file(a.config));
    if (seed_given) c.seed = g.seed;
    if (a.real_vdf) c.real_vdf = true;
    Transcript t;
    auto r = run_simulation(c, g.transcript.empty() ? nullptr : &t);
    write_out(g, "sim_report.csv", report_csv(r));
    write_out(g, "sim_report.json", report_json(r));
    if (!g.transcript.empty()) {
        std::ofstream out(g.transcript, std::ios::binary);
        if (!out) throw Error("IoError", "cannot write " + g.transcript);
        t.write_jsonl(out);
    }
    char line[160];
    std::snprintf(line, sizeof line, "victims %llu, frontrun %llu, frontrun_rate %.6f, t1 %.6f s, max victim wait %.6f s\n",
                  static_cast<unsigned long long>(r.victims), static_cast<unsigned long long>(r.frontrun_count),
                  r.frontrun_rate, r.t1_s, r.max_victim_wait_s);
    std::cout << line;
}

// analyze --------------------------------------------------------------

struct AnalyzeArgs {
    std::string trace;
    std::string tips = "0:25:1";
    std::string delays = "0,100,500,1000,2000";
    std::string target;
    bool lenient = false;
};

TraceIngest load_trace(const AnalyzeArgs& a) {
    auto t = ingest_trace(a.trace, a.lenient ? IngestMode::Lenient : IngestMode::Strict);
    for (const auto& s : t.skipped) std::cerr << "skipped line " << s.line << ": " << s.reason << "\n";
    return t;
}

ordered_json skipped_json(const TraceIngest& t) {
    ordered_json out = ordered_json::array();
    for (const auto& s : t.skipped) out.push_back({{"line", s.line}, {"reason", s.reason}});
    return out;
}

void cmd_analyze_grid(const Globals& g, const AnalyzeArgs& a) {
    auto t = load_trace(a);
    auto grid = grid_report(t.records, parse_grid(a.tips), parse_grid(a.delays));
    write_out(g, "grid.csv", grid_csv(grid));
    write_out(g, "grid.json", dump({{"schema", "grid/1"},
                                    {"records", t.records.size()},
                                    {"skipped", skipped_json(t)},
                                    {"first_block", grid.first_block},
                                    {"last_block", grid.last_block},
                                    {"tip_points", grid.tip_pct.size()},
                                    {"delay_points", grid.vdf_delay_s.size()}}));
    std::cout << "records " << t.records.size() << ", skipped " << t.skipped.size() << ", cells "
              << grid.tip_pct.size() * grid.vdf_delay_s.size() << "\n";
}

void cmd_analyze_recommend(const Globals& g, const AnalyzeArgs& a) {
    auto t = load_trace(a);
    const Micro target = parse_micro(a.target);
    if (target.v < 0 || target.v > kMicro) throw Error("BadNumber", "target must lie in [0, 1]");
    auto r = recommend_epoch(t.records, target, parse_grid(a.delays), parse_grid(a.tips));
    char prob[32];
    std::snprintf(prob, sizeof prob, "%.6f", r.probability.value());
    write_out(g, "recommendation.json", dump({{"schema", "recommendation/1"},
                                              {"target_probability", format_micro(target)},
                                              {"tip_pct", format_micro(r.tip_pct)},
                                              {"vdf_delay_s", format_micro(r.vdf_delay_s)},
                                              {"count", r.probability.count},
                                              {"total", r.probability.total},
                                              {"probability", prob}}));
    std::cout << "tip_pct " << format_micro(r.tip_pct) << ", vdf_delay_s " << format_micro(r.vdf_delay_s)
              << ", probability " << prob << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FIRST frontrunning-resistance toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Seed for every random choice");
    app.add_option("--out-dir", g.out_dir, "Directory for output artifacts");
    app.add_option("--transcript", g.transcript, "Write protocol messages as JSON lines (sim run)");

    KeygenArgs kg;
    auto* keygen_cmd = app.add_subcommand("keygen", "Generate BLS key pairs");
    keygen_cmd->add_option("--count", kg.count)->check(CLI::Range(1u, 10000u));
    keygen_cmd->add_option("--label", kg.label);

    SetupArgs sa;
    auto* setup_cmd = app.add_subcommand("setup", "Deploy the contract and generate public parameters");
    setup_cmd->add_option("--verifiers", sa.verifiers);
    setup_cmd->add_option("--T", sa.T, "VDF difficulty");
    setup_cmd->add_option("--k", sa.k, "Security parameter");
    setup_cmd->add_option("--share-bits", sa.share_bits, "Bits per modulus share (default 2k+32)");
    setup_cmd->add_option("--freshness", sa.freshness, "Freshness threshold in blocks");
    setup_cmd->add_option("--address", sa.address, "Contract address");

    VdfArgs va;
    auto* vdf_cmd = app.add_subcommand("vdf", "VDF evaluation, verification and benchmarking");
    vdf_cmd->require_subcommand(1);
    auto* eval_cmd = vdf_cmd->add_subcommand("eval", "Evaluate and prove");
    for (auto* c : {eval_cmd}) {
        c->add_option("--pp", va.pp_file, "pp.json from setup");
        c->add_option("--modulus", va.modulus);
        c->add_option("--T", va.T);
        c->add_option("--k", va.k);
        c->add_option("--x", va.x, "Input (default: seeded random)");
        c->add_option("--out", va.out, "Proof file name");
    }
    auto* verify_cmd = vdf_cmd->add_subcommand("verify", "Verify a proof file");
    verify_cmd->add_option("--proof", va.proof_file)->required();
    auto* bench_cmd = vdf_cmd->add_subcommand("bench", "Time eval and verify over a T grid");
    bench_cmd->add_option("--T-grid", va.T_grid);
    bench_cmd->add_option("--modulus", va.modulus);
    bench_cmd->add_option("--pp", va.pp_file);
    bench_cmd->add_option("--k", va.k);

    SimArgs sm;
    auto* sim_cmd = app.add_subcommand("sim", "Chain simulation");
    sim_cmd->require_subcommand(1);
    auto* run_cmd = sim_cmd->add_subcommand("run", "Run a simconfig/1 document");
    run_cmd->add_option("--config", sm.config)->required();
    run_cmd->add_flag("--real-vdf", sm.real_vdf, "Evaluate the VDF at the configured T");

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Trace analytics");
    analyze_cmd->require_subcommand(1);
    auto* grid_cmd = analyze_cmd->add_subcommand("grid", "Frontrun probability over a grid");
    auto* rec_cmd = analyze_cmd->add_subcommand("recommend", "Recommend tip and delay");
    for (auto* c : {grid_cmd, rec_cmd}) {
        c->add_option("--trace", an.trace)->required();
        c->add_option("--tips", an.tips, "Tip grid in percent: a,b,c or start:stop:step");
        c->add_option("--delays", an.delays, "Delay grid in seconds");
        c->add_flag("--lenient", an.lenient, "Skip malformed rows instead of failing");
    }
    rec_cmd->add_option("--target", an.target)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*keygen_cmd) cmd_keygen(g, kg);
        else if (*setup_cmd) cmd_setup(g, sa);
        else if (*eval_cmd) cmd_vdf_eval(g, va);
        else if (*verify_cmd) cmd_vdf_verify(va);
        else if (*bench_cmd) cmd_vdf_bench(g, va);
        else if (*run_cmd) cmd_sim_run(g, sm, app.count("--seed") > 0);
        else if (*grid_cmd) cmd_analyze_grid(g, an);
        else if (*rec_cmd) cmd_analyze_recommend(g, an);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
