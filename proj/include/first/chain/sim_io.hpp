#pragma once

#include <string>
#include <string_view>

#include "first/chain/simulation.hpp"

namespace first {

inline constexpr std::string_view kSimConfigSchema = "simconfig/1";

/// Parses a "simconfig/1" document. Missing keys take their defaults;
/// unknown keys, wrong types and invalid values throw ConfigInvalid.
SimConfig parse_sim_config(std::string_view json_text);
std::string dump_sim_config(const SimConfig& c);

/// Per-transaction CSV, one row per submitted transaction.
std::string report_csv(const SimReport& r);
/// Aggregates, config echo and conservation counts.
std::string report_json(const SimReport& r);

}  // namespace first
