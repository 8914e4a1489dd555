#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rhsim/mitigation.hpp"
#include "rhsim/patterns.hpp"
#include "rhsim/timing.hpp"

namespace rhsim {

// Per-row accumulated activations since the row's last reset. An entry
// resets when a TrrAction names the row as aggressor and, by default, at
// every window boundary.
class DisturbanceLedger {
public:
    explicit DisturbanceLedger(std::int64_t rows_per_bank)
        : counts_(static_cast<std::size_t>(rows_per_bank), 0) {}

    void record(row_t row) {
        const std::uint32_t c = ++counts_[row];
        if (c > window_max_) window_max_ = c;
    }

    void reset_row(row_t row) { counts_[row] = 0; }

    void reset_all() { std::fill(counts_.begin(), counts_.end(), 0); }

    void begin_window() { window_max_ = 0; }

    std::uint32_t window_max() const { return window_max_; }
    std::uint32_t count(row_t row) const { return counts_[row]; }
    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : counts_) t += c;
        return t;
    }

private:
    std::vector<std::uint32_t> counts_;
    std::uint32_t window_max_ = 0;  // running max within the current window
};

struct RunConfig {
    std::int64_t windows = 4;
    std::uint64_t seed = 1;
    bool window_reset = true;
};

struct DisturbanceReport {
    std::string algorithm;
    std::string pattern;
    std::int64_t n_rows = 0;
    std::int64_t counters = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> window_max;
    std::uint32_t overall_max = 0;
    double mean_window_max = 0.0;
    std::uint64_t trr_count = 0;
    bool bitflip = false;

    void finish();
};

// One simulated bank: every tREFIe a refresh command fires (tracker may
// TRR), then the interval's activations are delivered at tRCmin spacing.
DisturbanceReport run_simulation(const TimingConfig& timing,
                                 const PatternSpec& pattern,
                                 Mitigation& tracker,
                                 const RunConfig& run,
                                 std::int64_t counters_label = 0);

// floor(tRFC / tRCmin): activations' worth of work available inside one
// refresh operation. Piggybacking normal refresh with TRR needs
// 1 + 2*blast_radius of it.
std::int64_t refresh_work_budget(const TimingConfig& timing);
bool refresh_budget_sufficient(const TimingConfig& timing, int blast_radius);

struct SweepAxis {
    std::vector<std::int64_t> n_rows;
    std::vector<std::int64_t> counters;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> trackers;
    std::vector<PatternKind> patterns;
};

struct SweepSummary {
    std::string algorithm;
    PatternKind pattern;
    std::int64_t counters = 0;
    double average = 0.0;        // mean over n_rows of per-config maxima
    std::uint32_t maximum = 0;   // max over the n_rows axis
};

struct SweepResult {
    std::vector<DisturbanceReport> reports;
    std::vector<SweepSummary> summaries;
};

struct TrackerParams;  // defined in config.hpp

// Cross product of (pattern, tracker, counters, n_rows, seed) runs, executed
// on `threads` workers and ordered by that deterministic key.
SweepResult sweep(const TimingConfig& timing, const PatternSpec& base_pattern,
                  const SweepAxis& axis, const TrackerParams& params,
                  const RunConfig& run, int threads = 0);

std::string csv_header();
void append_csv(std::string& out, const DisturbanceReport& r);

}  // namespace rhsim
