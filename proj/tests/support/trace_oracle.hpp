#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "first/analytics/trace.hpp"
#include "first/common/drbg.hpp"

namespace first::testing {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// Brute-force enumeration, using boost rationals instead of the library's
// integer cross-multiplication.
inline cpp_rational brute_force(const std::vector<TraceRecord>& rs, Micro tip, Micro delay) {
    const cpp_rational tip_pct(cpp_int(tip.v), cpp_int(kMicro));
    const cpp_rational wait_min(cpp_int(delay.v), cpp_int(kMicro));
    std::size_t hits = 0;
    for (const auto& r : rs) {
        cpp_rational pct = cpp_rational(cpp_int(r.miner_tip_wei.get_str())) * 100 / cpp_int(r.base_fee_wei.get_str());
        cpp_rational wait(cpp_int(r.wait_seconds.v), cpp_int(kMicro));
        if (pct >= tip_pct && wait >= wait_min) ++hits;
    }
    return cpp_rational(cpp_int(hits), cpp_int(rs.size()));
}

inline std::vector<TraceRecord> random_trace(Drbg& rng, std::size_t n) {
    std::vector<TraceRecord> rs;
    for (std::size_t i = 0; i < n; ++i) {
        TraceRecord r;
        r.block_number = 13163075 + rng.uniform(500);
        r.tx_id = "0x" + std::to_string(i);
        r.base_fee_wei = mpz_class(std::to_string(1 + rng.uniform(200'000'000'000ull)));
        // tips around the base fee so thresholds land on both sides, with some exact hits
        if (rng.uniform(4) == 0)
            r.miner_tip_wei = r.base_fee_wei * rng.uniform(40) / 100;
        else
            r.miner_tip_wei = mpz_class(std::to_string(rng.uniform(80'000'000'000ull)));
        r.gas_price_wei = r.base_fee_wei + r.miner_tip_wei;
        r.wait_seconds = Micro{static_cast<std::int64_t>(rng.uniform(3000)) * kMicro +
                               (rng.uniform(2) ? static_cast<std::int64_t>(rng.uniform(kMicro)) : 0)};
        rs.push_back(std::move(r));
    }
    return rs;
}

}  // namespace first::testing
