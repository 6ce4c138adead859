#include "first/analytics/trace.hpp"

#include <charconv>
#include <fstream>

#include "first/common/error.hpp"

namespace first {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

mpz_class wei(std::string_view s, const char* name) {
    if (!all_digits(s)) throw std::invalid_argument(std::string(name) + " is not a non-negative integer");
    return mpz_class(std::string(s), 10);
}

TraceRecord parse_row(std::string_view line) {
    auto f = split(line);
    if (f.size() != 6) throw std::invalid_argument("expected 6 fields, got " + std::to_string(f.size()));
    TraceRecord r;
    if (!all_digits(f[0])) throw std::invalid_argument("block_number is not a non-negative integer");
    auto [p, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), r.block_number);
    if (ec != std::errc() || p != f[0].data() + f[0].size()) throw std::invalid_argument("block_number out of range");
    if (f[1].empty()) throw std::invalid_argument("tx_id is empty");
    r.tx_id = std::string(f[1]);
    r.base_fee_wei = wei(f[2], "base_fee_wei");
    r.miner_tip_wei = wei(f[3], "miner_tip_wei");
    r.gas_price_wei = wei(f[4], "gas_price_wei");
    try {
        r.wait_seconds = parse_micro(f[5]);
    } catch (const Error& e) {
        throw std::invalid_argument("wait_seconds: " + std::string(e.what()));
    }
    if (r.base_fee_wei <= 0) throw std::invalid_argument("base_fee_wei must be positive");
    if (r.wait_seconds.v < 0) throw std::invalid_argument("wait_seconds must be non-negative");
    return r;
}

}  // namespace

Micro parse_micro(std::string_view s) {
    const std::string orig(s);
    auto bad = [&] { return Error("BadNumber", "'" + orig + "' is not a decimal with at most six fractional digits"); };
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw bad();
    if (!whole.empty() && !all_digits(whole)) throw bad();
    if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) throw bad();
    if (dot != std::string_view::npos && frac.empty() && whole.empty()) throw bad();
    if (frac.size() > 6) throw bad();
    std::int64_t w = 0;
    if (!whole.empty()) {
        auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
        if (ec != std::errc() || w > INT64_MAX / kMicro - 1) throw bad();
    }
    std::int64_t fr = 0;
    for (std::size_t i = 0; i < 6; ++i) fr = fr * 10 + (i < frac.size() ? frac[i] - '0' : 0);
    const std::int64_t v = w * kMicro + fr;
    return Micro{neg ? -v : v};
}

std::string format_micro(Micro m) {
    const bool neg = m.v < 0;
    const std::uint64_t a = neg ? 0 - static_cast<std::uint64_t>(m.v) : static_cast<std::uint64_t>(m.v);
    std::string frac = std::to_string(a % kMicro);
    frac.insert(0, 6 - frac.size(), '0');
    return (neg ? "-" : "") + std::to_string(a / kMicro) + "." + frac;
}

bool TraceRecord::tip_at_least(Micro pct) const {
    // 100 * tip / base >= pct / 1e6
    mpz_class lhs = miner_tip_wei * 100 * kMicro;
    mpz_class rhs = base_fee_wei * mpz_class(std::to_string(pct.v));
    return lhs >= rhs;
}

TraceIngest ingest_trace(std::istream& in, IngestMode mode) {
    std::string line;
    if (!std::getline(in, line)) throw Error("EmptyTrace", "no header line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceHeader)
        throw Error("SchemaMismatch", "header must be '" + std::string(kTraceHeader) + "', got '" + line + "'");

    TraceIngest out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            out.records.push_back(parse_row(line));
        } catch (const std::invalid_argument& e) {
            if (mode == IngestMode::Strict) throw Error("MalformedRow", "line " + std::to_string(lineno) + ": " + e.what());
            out.skipped.push_back({lineno, e.what()});
        }
    }
    if (out.records.empty()) throw Error("EmptyTrace", "no valid records");
    return out;
}

TraceIngest ingest_trace(const std::string& path, IngestMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("TraceNotFound", "cannot open " + path);
    return ingest_trace(in, mode);
}

}  // namespace first
