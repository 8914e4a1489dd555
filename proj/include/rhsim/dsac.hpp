#pragma once

#include <cmath>
#include <cstdint>

#include "rhsim/count_table.hpp"
#include "rhsim/mitigation.hpp"
#include "rhsim/random.hpp"
#include "rhsim/timing.hpp"

namespace rhsim {

// Extra count weight for a long activation: alpha * log2(tras / tras_min).
// Zero disables time weighting entirely.
inline double time_weight(picos_t tras, picos_t tras_min, double alpha) {
    if (tras < tras_min)
        throw input_error("tRAS below tRASmin");
    if (alpha == 0.0) return 0.0;
    return alpha * std::log2(static_cast<double>(tras) /
                             static_cast<double>(tras_min));
}

// Stochastic-replacement admission probability, 1 / (min_count + 1).
inline double replacement_probability(double min_count) {
    return 1.0 / (min_count + 1.0);
}

struct DsacConfig {
    std::size_t capacity = 20;
    double alpha = 0.0;
    int blast_radius = 2;
    // MPA_tREFIe term of the adaptive TRR threshold. Kept independently
    // configurable: the TRR-threshold discussion rounds 255 up to 256.
    std::int64_t trr_mpa_term = 256;
    std::int64_t rh_threshold = 20000;
    bool integer_counts = false;  // round time weights down to model hardware
    RngMode rng_mode = RngMode::exact_uniform;

    double trr_threshold() const {
        return static_cast<double>(rh_threshold) / 2.0 -
               static_cast<double>(trr_mpa_term);
    }

    void validate() const {
        if (capacity < 1) throw config_error("dsac capacity must be >= 1");
        if (blast_radius < 1) throw config_error("blast_radius must be >= 1");
        if (alpha < 0.0) throw config_error("alpha must be non-negative");
        if (static_cast<double>(trr_mpa_term) >= rh_threshold / 2.0)
            throw config_error("trr_mpa_term must be below rh_threshold/2");
    }
};

// In-DRAM stochastic and approximate counting tracker.
//
// Hit: count += 1 + weight. Miss with a free slot: insert at 1 + weight.
// Miss on a full table: admit over the minimum-count entry with probability
// 1/(min+1); the admitted row keeps the evicted entry's count (approximate
// counting) plus its own increment. Rows that lose the draw leave no trace.
//
// The TRR flag arms once the table's count sum reaches
// rh_threshold/2 - trr_mpa_term; the next refresh command then refreshes the
// maximum-count row's neighbors and clears the whole table, which also
// returns the replacement probability to 1.
class Dsac final : public Mitigation {
public:
    Dsac(const DsacConfig& cfg, const TimingConfig& timing,
         std::uint64_t seed)
        : cfg_(cfg),
          table_(cfg.capacity, timing.rows_per_bank),
          rng_(seed, cfg.rng_mode),
          tras_min_(timing.tras_min),
          rows_per_bank_(timing.rows_per_bank) {
        cfg_.rh_threshold = timing.rh_threshold;
        cfg_.validate();
        threshold_ = cfg_.trr_threshold();
    }

    std::optional<TrrAction> on_activation(row_t row, picos_t tras,
                                           picos_t) override {
        double inc = 1.0 + weight_of(tras);
        const int slot = table_.find(row);
        if (slot >= 0) {
            table_.add(static_cast<std::size_t>(slot), inc);
        } else if (!table_.full()) {
            table_.insert(row, inc);
        } else {
            const auto [min_pos, min_count] = table_.min_entry();
            if (draw_replacement(min_count))
                table_.take_over(min_pos, row, inc);
        }
        if (!trr_flag_ && table_.sum() >= threshold_) trr_flag_ = true;
        return std::nullopt;
    }

    TrrAction on_refresh(std::uint64_t cmd_index, picos_t) override {
        TrrAction action;
        action.refresh_cmd_index = cmd_index;
        if (!trr_flag_) return action;
        if (table_.size() == 0) return action;
        const auto [max_pos, max_count] = table_.max_entry();
        if (max_count <= 0.0) return action;  // all zero: no TRR
        const row_t aggressor = table_.entry(max_pos).row;
        action.aggressor = aggressor;
        action.victims = victims_of(aggressor, cfg_.blast_radius, rows_per_bank_);
        table_.clear();
        trr_flag_ = false;
        return action;
    }

    void reset_window(std::uint64_t window_index) override {
        rng_.reseed_per_window(window_index);
    }

    std::string_view name() const override { return "dsac"; }

    bool trr_threshold_reached() const { return table_.sum() >= threshold_; }
    double weighted_sum() const { return table_.sum(); }
    const CountTable& table() const { return table_; }
    RandomSource& rng() { return rng_; }

private:
    double weight_of(picos_t tras) const {
        if (cfg_.alpha == 0.0) {
            if (tras < tras_min_) throw input_error("tRAS below tRASmin");
            return 0.0;
        }
        double w = time_weight(tras, tras_min_, cfg_.alpha);
        return cfg_.integer_counts ? std::floor(w) : w;
    }

    // Algorithm 1 admits on r <= P(r); the LFSR build compares the raw
    // 20-bit draw against the probability LUT slot for the integer min count.
    bool draw_replacement(double min_count) {
        if (rng_.mode() == RngMode::lfsr20) {
            const auto m = static_cast<std::uint64_t>(min_count);
            const std::uint32_t cut =
                static_cast<std::uint32_t>((1ULL << 20) / (m + 1));
            return rng_.next_lfsr20() < cut;
        }
        return rng_.next_double() <= replacement_probability(min_count);
    }

    DsacConfig cfg_;
    CountTable table_;
    RandomSource rng_;
    picos_t tras_min_;
    std::int64_t rows_per_bank_;
    double threshold_ = 0.0;
    bool trr_flag_ = false;
};

}  // namespace rhsim
