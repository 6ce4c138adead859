#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "first/analytics/trace.hpp"

namespace first {

/// count / total, kept as integers until displayed.
struct Probability {
    std::uint64_t count = 0;
    std::uint64_t total = 0;

    double value() const { return total ? static_cast<double>(count) / static_cast<double>(total) : 0.0; }
    mpq_class exact() const;
    /// count / total <= p, exactly.
    bool at_most(Micro p) const;
};

/// Share of records with tip_pct >= threshold and wait >= delay.
/// Throws EmptyTrace.
Probability frontrun_probability(std::span<const TraceRecord> records, Micro tip_threshold_pct, Micro vdf_delay_s);

struct GridReport {
    std::vector<Micro> tip_pct;
    std::vector<Micro> vdf_delay_s;
    std::vector<std::vector<Probability>> cells;  // [tip][delay]
    std::uint64_t first_block = 0, last_block = 0;

    const Probability& at(std::size_t tip, std::size_t delay) const { return cells[tip][delay]; }
};

/// Throws EmptyGrid or EmptyTrace. Cells are computed in parallel.
GridReport grid_report(std::span<const TraceRecord> records, std::vector<Micro> tip_grid,
                       std::vector<Micro> delay_grid);

/// Header `tip_pct,vdf_delay_s,count,total,probability`, decimals with six places.
std::string grid_csv(const GridReport& g);

struct Recommendation {
    Micro tip_pct;
    Micro vdf_delay_s;
    Probability probability;
};

/// Smallest grid point, ordered by delay then tip, with Pr <= target.
/// Throws Infeasible.
Recommendation recommend_epoch(std::span<const TraceRecord> records, Micro target_probability,
                               std::vector<Micro> delay_candidates, std::vector<Micro> tip_grid);

/// "a,b,c" or "start:stop:step" (inclusive).
std::vector<Micro> parse_grid(std::string_view spec);

}  // namespace first
