#pragma once

#include <optional>
#include <string>
#include <vector>

#include "first/chain/mempool.hpp"
#include "first/protocol/transcript.hpp"

namespace first {

enum class AdversaryStrategy { None, Reactive, OfflinePrecompute };
std::string_view to_string(AdversaryStrategy s);
std::optional<AdversaryStrategy> parse_strategy(std::string_view s);

/// Background tip, in percent of the base fee at submission.
struct TipDistribution {
    enum class Kind { Uniform, Normal } kind = Kind::Uniform;
    double a = 0;   // uniform: min; normal: mean
    double b = 40;  // uniform: max; normal: stddev
};

struct SimConfig {
    std::uint64_t seed = 1;
    double block_interval_s = 12;
    std::uint64_t block_gas_target = 1'500'000;
    std::uint64_t block_gas_limit = 3'000'000;
    std::uint64_t base_fee_init = 1'000'000'000;
    double tx_arrival_rate = 6;  // background tx per second
    TipDistribution tip_distribution;
    double vdf_seconds_per_step = 1e-5;
    std::uint64_t difficulty_T = 1'000'000;
    std::uint64_t freshness_threshold = 5;
    AdversaryStrategy adversary_strategy = AdversaryStrategy::Reactive;
    std::uint64_t block_qty = 100;
    double duration_s = 900;

    std::uint32_t victim_count = 10;
    double victim_tip_pct = 20;
    double victim_start_s = 120;  // victims reveal in [victim_start_s, duration_s)
    double adversary_tip_bump_pct = 5;
    std::uint64_t background_gas = 21'000;
    std::uint64_t first_gas = 120'000;
    std::uint32_t verifier_count = 3;
    unsigned security_k = 64;
    bool real_vdf = false;  // evaluate the VDF at difficulty_T instead of a small stand-in

    double t1() const { return static_cast<double>(difficulty_T) * vdf_seconds_per_step; }
};

/// Throws ConfigInvalid.
void validate(const SimConfig& c);

enum class TxStatus { Confirmed, Rejected, Pending };
std::string_view to_string(TxStatus s);

struct TxRecord {
    std::string id;
    TxKind kind = TxKind::Background;
    double submit_s = 0;
    std::optional<double> confirm_s;
    std::optional<std::uint64_t> block;
    std::optional<std::uint32_t> position;
    double waited_s = 0;  // to confirmation, or to the horizon if still pending
    TxStatus status = TxStatus::Pending;
    std::string reject_reason;
    bool frontrun = false;  // victims only
    std::uint64_t tip = 0;
    std::optional<std::uint32_t> target;  // adversary: victim index attacked
};

struct SimReport {
    SimConfig config;
    double t1_s = 0;
    std::vector<TxRecord> txs;

    std::uint64_t victims = 0;
    std::uint64_t frontrun_count = 0;
    double frontrun_rate = 0;
    double max_victim_wait_s = 0;

    std::uint64_t adversary_submitted = 0;
    std::uint64_t adversary_executed = 0;
    std::uint64_t adversary_stale = 0;

    std::uint64_t submitted = 0, confirmed = 0, rejected = 0, pending = 0;
    std::uint64_t blocks = 0;
    std::uint64_t base_fee_final = 0, base_fee_min = 0, base_fee_max = 0;
    std::string modulus_hex;  // federated N (a sum of prime shares)
};

/// Deterministic in `config`: identical configs give identical reports.
/// Protocol messages of every run are appended to `transcript` if given.
SimReport run_simulation(const SimConfig& config, Transcript* transcript = nullptr);

}  // namespace first
