#include "first/chain/sim_io.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>
#include <set>

#include "first/common/error.hpp"

namespace first {

namespace {

using nlohmann::ordered_json;

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

ordered_json tip_json(const TipDistribution& t) {
    if (t.kind == TipDistribution::Kind::Uniform) return {{"kind", "uniform"}, {"min_pct", t.a}, {"max_pct", t.b}};
    return {{"kind", "normal"}, {"mean_pct", t.a}, {"stddev_pct", t.b}};
}

ordered_json config_json(const SimConfig& c) {
    return {{"schema", kSimConfigSchema},
            {"seed", c.seed},
            {"block_interval_s", c.block_interval_s},
            {"block_gas_target", c.block_gas_target},
            {"block_gas_limit", c.block_gas_limit},
            {"base_fee_init", c.base_fee_init},
            {"tx_arrival_rate", c.tx_arrival_rate},
            {"tip_distribution", tip_json(c.tip_distribution)},
            {"vdf_seconds_per_step", c.vdf_seconds_per_step},
            {"difficulty_T", c.difficulty_T},
            {"freshness_threshold", c.freshness_threshold},
            {"adversary_strategy", to_string(c.adversary_strategy)},
            {"block_qty", c.block_qty},
            {"duration_s", c.duration_s},
            {"victim_count", c.victim_count},
            {"victim_tip_pct", c.victim_tip_pct},
            {"victim_start_s", c.victim_start_s},
            {"adversary_tip_bump_pct", c.adversary_tip_bump_pct},
            {"background_gas", c.background_gas},
            {"first_gas", c.first_gas},
            {"verifier_count", c.verifier_count},
            {"security_k", c.security_k},
            {"real_vdf", c.real_vdf}};
}

[[noreturn]] void invalid(const std::string& what) { throw Error("ConfigInvalid", what); }

template <class T>
void read(const ordered_json& j, const char* key, T& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) invalid(std::string(key) + " must be a boolean");
            out = it->get<bool>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() && it->get<long long>() < 0))
                invalid(std::string(key) + " must be a non-negative integer");
            const auto v = it->get<std::uint64_t>();
            if (v > std::numeric_limits<T>::max()) invalid(std::string(key) + " is out of range");
            out = static_cast<T>(v);
        } else {
            if (!it->is_number()) invalid(std::string(key) + " must be a number");
            out = it->get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        invalid(std::string(key) + ": " + e.what());
    }
}

void reject_unknown(const ordered_json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& item : j.items())
        if (!known.contains(item.key())) invalid("unknown key '" + item.key() + "' in " + where);
}

}  // namespace

SimConfig parse_sim_config(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        invalid(std::string("not JSON: ") + e.what());
    }
    if (!j.is_object()) invalid("top level must be an object");
    if (!j.contains("schema") || j["schema"] != kSimConfigSchema)
        invalid("schema must be \"" + std::string(kSimConfigSchema) + "\"");

    SimConfig c;
    std::set<std::string> known;
    const ordered_json defaults = config_json(c);
    for (const auto& item : defaults.items()) known.insert(item.key());
    reject_unknown(j, known, "config");

    read(j, "seed", c.seed);
    read(j, "block_interval_s", c.block_interval_s);
    read(j, "block_gas_target", c.block_gas_target);
    read(j, "block_gas_limit", c.block_gas_limit);
    read(j, "base_fee_init", c.base_fee_init);
    read(j, "tx_arrival_rate", c.tx_arrival_rate);
    read(j, "vdf_seconds_per_step", c.vdf_seconds_per_step);
    read(j, "difficulty_T", c.difficulty_T);
    read(j, "freshness_threshold", c.freshness_threshold);
    read(j, "block_qty", c.block_qty);
    read(j, "duration_s", c.duration_s);
    read(j, "victim_count", c.victim_count);
    read(j, "victim_tip_pct", c.victim_tip_pct);
    read(j, "victim_start_s", c.victim_start_s);
    read(j, "adversary_tip_bump_pct", c.adversary_tip_bump_pct);
    read(j, "background_gas", c.background_gas);
    read(j, "first_gas", c.first_gas);
    read(j, "verifier_count", c.verifier_count);
    read(j, "security_k", c.security_k);
    read(j, "real_vdf", c.real_vdf);

    if (j.contains("adversary_strategy")) {
        const auto& s = j["adversary_strategy"];
        auto parsed = s.is_string() ? parse_strategy(s.get<std::string>()) : std::nullopt;
        if (!parsed) invalid("adversary_strategy must be none, reactive or offline_precompute");
        c.adversary_strategy = *parsed;
    }
    if (j.contains("tip_distribution")) {
        const auto& t = j["tip_distribution"];
        if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string())
            invalid("tip_distribution needs a kind");
        const auto kind = t["kind"].get<std::string>();
        if (kind == "uniform") {
            reject_unknown(t, {"kind", "min_pct", "max_pct"}, "tip_distribution");
            c.tip_distribution = {TipDistribution::Kind::Uniform, 0, 40};
            read(t, "min_pct", c.tip_distribution.a);
            read(t, "max_pct", c.tip_distribution.b);
        } else if (kind == "normal") {
            reject_unknown(t, {"kind", "mean_pct", "stddev_pct"}, "tip_distribution");
            c.tip_distribution = {TipDistribution::Kind::Normal, 20, 10};
            read(t, "mean_pct", c.tip_distribution.a);
            read(t, "stddev_pct", c.tip_distribution.b);
        } else {
            invalid("tip_distribution kind must be uniform or normal");
        }
    }
    validate(c);
    return c;
}

std::string dump_sim_config(const SimConfig& c) { return config_json(c).dump(2) + "\n"; }

std::string report_csv(const SimReport& r) {
    std::string out = "tx_id,kind,submit_s,confirm_s,block,position,waited_s,status,reject_reason,frontrun,tip\n";
    for (const auto& t : r.txs) {
        out += t.id + "," + std::string(to_string(t.kind)) + "," + fixed6(t.submit_s) + ",";
        out += (t.confirm_s ? fixed6(*t.confirm_s) : "") + ",";
        out += (t.block ? std::to_string(*t.block) : "") + ",";
        out += (t.position ? std::to_string(*t.position) : "") + ",";
        out += fixed6(t.waited_s) + "," + std::string(to_string(t.status)) + "," + t.reject_reason + ",";
        out += std::string(t.kind == TxKind::Victim ? (t.frontrun ? "true" : "false") : "") + ",";
        out += std::to_string(t.tip) + "\n";
    }
    return out;
}

std::string report_json(const SimReport& r) {
    ordered_json j;
    j["schema"] = "simreport/1";
    j["config"] = config_json(r.config);
    j["t1_s"] = r.t1_s;
    j["victims"] = r.victims;
    j["frontrun_count"] = r.frontrun_count;
    j["frontrun_rate"] = r.frontrun_rate;
    j["max_victim_wait_s"] = r.max_victim_wait_s;
    j["adversary"] = {{"submitted", r.adversary_submitted},
                      {"executed", r.adversary_executed},
                      {"rejected_stale", r.adversary_stale}};
    j["counts"] = {{"submitted", r.submitted},
                   {"confirmed", r.confirmed},
                   {"rejected", r.rejected},
                   {"pending", r.pending}};
    j["blocks"] = {{"mined", r.blocks},
                   {"base_fee_final", r.base_fee_final},
                   {"base_fee_min", r.base_fee_min},
                   {"base_fee_max", r.base_fee_max}};
    j["modulus"] = {{"construction", "sum of prime shares"}, {"hex", r.modulus_hex}};
    return j.dump(2) + "\n";
}

}  // namespace first
