#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace first {

/// Fixed-point decimal with six fractional digits, stored as an integer
/// count of millionths. Used for seconds and percentages so that every
/// comparison is exact.
struct Micro {
    std::int64_t v = 0;
    auto operator<=>(const Micro&) const = default;
};

inline constexpr std::int64_t kMicro = 1'000'000;

/// Accepts an optional sign, digits, and at most six fractional digits.
Micro parse_micro(std::string_view s);
std::string format_micro(Micro m);
inline Micro micro_from_int(std::int64_t whole) { return Micro{whole * kMicro}; }

struct TraceRecord {
    std::uint64_t block_number = 0;
    std::string tx_id;
    mpz_class base_fee_wei;
    mpz_class miner_tip_wei;
    mpz_class gas_price_wei;
    Micro wait_seconds;  // first seen to confirmed

    /// 100 * tip / base_fee >= pct, exactly.
    bool tip_at_least(Micro pct) const;
};

inline constexpr std::string_view kTraceHeader =
    "block_number,tx_id,base_fee_wei,miner_tip_wei,gas_price_wei,wait_seconds";

enum class IngestMode { Strict, Lenient };

struct SkippedRow {
    std::size_t line = 0;
    std::string reason;
};

struct TraceIngest {
    std::vector<TraceRecord> records;
    std::vector<SkippedRow> skipped;
};

/// Throws SchemaMismatch on a bad header, MalformedRow in strict mode, and
/// EmptyTrace when no valid record remains.
TraceIngest ingest_trace(std::istream& in, IngestMode mode);
TraceIngest ingest_trace(const std::string& path, IngestMode mode);

}  // namespace first
