#include "first/analytics/frontrun.hpp"

#include <algorithm>
#include <thread>

#include "first/common/error.hpp"

namespace first {

mpq_class Probability::exact() const {
    if (total == 0) return 0;
    mpq_class q(mpz_class(std::to_string(count)), mpz_class(std::to_string(total)));
    q.canonicalize();
    return q;
}

bool Probability::at_most(Micro p) const {
    // count / total <= p / 1e6
    mpz_class lhs = mpz_class(std::to_string(count)) * kMicro;
    mpz_class rhs = mpz_class(std::to_string(total)) * mpz_class(std::to_string(p.v));
    return lhs <= rhs;
}

Probability frontrun_probability(std::span<const TraceRecord> records, Micro tip, Micro delay) {
    if (records.empty()) throw Error("EmptyTrace", "no records");
    Probability p;
    p.total = records.size();
    for (const auto& r : records)
        if (r.tip_at_least(tip) && r.wait_seconds >= delay) ++p.count;
    return p;
}

GridReport grid_report(std::span<const TraceRecord> records, std::vector<Micro> tip_grid,
                       std::vector<Micro> delay_grid) {
    if (tip_grid.empty() || delay_grid.empty()) throw Error("EmptyGrid", "both grids need at least one point");
    if (records.empty()) throw Error("EmptyTrace", "no records");
    GridReport g;
    g.tip_pct = std::move(tip_grid);
    g.vdf_delay_s = std::move(delay_grid);
    g.cells.assign(g.tip_pct.size(), std::vector<Probability>(g.vdf_delay_s.size()));
    auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                        [](const auto& a, const auto& b) { return a.block_number < b.block_number; });
    g.first_block = lo->block_number;
    g.last_block = hi->block_number;

    const std::size_t workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                                static_cast<unsigned>(g.tip_pct.size())));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < g.tip_pct.size(); t += workers)
                for (std::size_t d = 0; d < g.vdf_delay_s.size(); ++d)
                    g.cells[t][d] = frontrun_probability(records, g.tip_pct[t], g.vdf_delay_s[d]);
        });
    for (auto& th : pool) th.join();
    return g;
}

std::string grid_csv(const GridReport& g) {
    std::string out = "tip_pct,vdf_delay_s,count,total,probability\n";
    for (std::size_t t = 0; t < g.tip_pct.size(); ++t)
        for (std::size_t d = 0; d < g.vdf_delay_s.size(); ++d) {
            const auto& c = g.cells[t][d];
            char prob[32];
            std::snprintf(prob, sizeof prob, "%.6f", c.value());
            out += format_micro(g.tip_pct[t]) + "," + format_micro(g.vdf_delay_s[d]) + "," + std::to_string(c.count) +
                   "," + std::to_string(c.total) + "," + prob + "\n";
        }
    return out;
}

Recommendation recommend_epoch(std::span<const TraceRecord> records, Micro target,
                               std::vector<Micro> delays, std::vector<Micro> tips) {
    if (records.empty()) throw Error("EmptyTrace", "no records");
    if (delays.empty() || tips.empty()) throw Error("EmptyGrid", "both grids need at least one point");
    std::sort(delays.begin(), delays.end());
    std::sort(tips.begin(), tips.end());
    for (auto d : delays)
        for (auto t : tips) {
            auto p = frontrun_probability(records, t, d);
            if (p.at_most(target)) return {t, d, p};
        }
    throw Error("Infeasible", "no (tip, delay) on the grid reaches probability " + format_micro(target));
}

std::vector<Micro> parse_grid(std::string_view spec) {
    std::vector<Micro> out;
    if (spec.find(':') != std::string_view::npos) {
        auto a = spec.find(':');
        auto b = spec.find(':', a + 1);
        if (b == std::string_view::npos) throw Error("BadGrid", "range grid needs start:stop:step");
        Micro start = parse_micro(spec.substr(0, a));
        Micro stop = parse_micro(spec.substr(a + 1, b - a - 1));
        Micro step = parse_micro(spec.substr(b + 1));
        if (step.v <= 0 || stop < start) throw Error("BadGrid", "range grid needs step > 0 and stop >= start");
        if ((stop.v - start.v) / step.v > 100000) throw Error("BadGrid", "range grid has too many points");
        for (std::int64_t v = start.v; v <= stop.v; v += step.v) out.push_back(Micro{v});
    } else {
        std::size_t start = 0;
        while (start <= spec.size()) {
            auto comma = spec.find(',', start);
            auto item = spec.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            out.push_back(parse_micro(item));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    if (out.empty()) throw Error("BadGrid", "empty grid");
    return out;
}

}  // namespace first
