#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "rhsim/count_table.hpp"
#include "rhsim/mitigation.hpp"
#include "rhsim/random.hpp"
#include "rhsim/timing.hpp"

namespace rhsim {

struct BaselineConfig {
    std::size_t capacity = 20;
    int blast_radius = 2;
    double para_probability = 0.001;
    std::size_t prohit_cold_size = 16;
    std::size_t prohit_hot_size = 4;
    double prohit_promote_probability = 0.5;
    std::size_t mrloc_queue_length = 512;
    double mrloc_probability_scale = 0.01;
    std::int64_t graphene_trr_threshold = 0;  // 0: rh_threshold / 4
    std::int64_t twice_trr_threshold = 0;     // 0: rh_threshold / 4

    void validate() const {
        if (capacity < 1) throw config_error("capacity must be >= 1");
        if (blast_radius < 1) throw config_error("blast_radius must be >= 1");
        if (para_probability <= 0.0 || para_probability > 1.0)
            throw config_error("para_probability must be in (0, 1]");
        if (prohit_promote_probability <= 0.0 || prohit_promote_probability > 1.0)
            throw config_error("prohit_promote_probability must be in (0, 1]");
        if (prohit_cold_size < 1 || prohit_hot_size < 1 || mrloc_queue_length < 1)
            throw config_error("table sizes must be >= 1");
    }
};

// Plain Space Saving: every miss on a full table unconditionally takes over
// the minimum entry. Kept as the counting-structure reference; it never
// issues TRRs of its own.
class SpaceSaving final : public Mitigation {
public:
    SpaceSaving(const BaselineConfig& cfg, const TimingConfig& timing)
        : table_(cfg.capacity, timing.rows_per_bank) {}

    std::optional<TrrAction> on_activation(row_t row, picos_t, picos_t) override {
        const int slot = table_.find(row);
        if (slot >= 0) {
            table_.add(static_cast<std::size_t>(slot), 1.0);
        } else if (!table_.full()) {
            table_.insert(row, 1.0);
        } else {
            const auto [min_pos, min_count] = table_.min_entry();
            (void)min_count;
            table_.take_over(min_pos, row, 1.0);
        }
        return std::nullopt;
    }

    TrrAction on_refresh(std::uint64_t cmd_index, picos_t) override {
        TrrAction a;
        a.refresh_cmd_index = cmd_index;
        return a;
    }

    void reset_window(std::uint64_t) override { table_.clear(); }
    std::string_view name() const override { return "space_saving"; }

    const CountTable& table() const { return table_; }

private:
    CountTable table_;
};

// Misra-Gries with a spillover counter. A miss takes over an entry whose
// count equals the spillover counter (empty slots count as zero), otherwise
// the spillover counter absorbs the activation. Rows whose count reaches the
// TRR threshold queue for the next refresh command; both the table and the
// spillover counter reset at every window boundary.
class Graphene final : public Mitigation {
public:
    Graphene(const BaselineConfig& cfg, const TimingConfig& timing)
        : table_(cfg.capacity, timing.rows_per_bank),
          queued_(cfg.capacity, false),
          blast_radius_(cfg.blast_radius),
          rows_per_bank_(timing.rows_per_bank) {
        threshold_ = cfg.graphene_trr_threshold > 0
                         ? cfg.graphene_trr_threshold
                         : timing.rh_threshold / 4;
    }

    std::optional<TrrAction> on_activation(row_t row, picos_t, picos_t) override;
    TrrAction on_refresh(std::uint64_t cmd_index, picos_t) override;

    void reset_window(std::uint64_t) override {
        table_.clear();
        spillover_ = 0;
        pending_.clear();
        std::fill(queued_.begin(), queued_.end(), false);
    }

    std::string_view name() const override { return "graphene"; }

    const CountTable& table() const { return table_; }
    std::int64_t spillover() const { return spillover_; }

private:
    CountTable table_;
    std::vector<bool> queued_;  // per slot: row already waits for TRR
    std::deque<row_t> pending_;
    std::int64_t spillover_ = 0;
    std::int64_t threshold_ = 0;
    int blast_radius_;
    std::int64_t rows_per_bank_;
};

// Reduced TWiCe: exact counts for tracked rows (an evicted row restarts at
// one), per-interval threshold checks, and a life counter that prunes
// entries falling behind the pace needed to ever reach the TRR threshold
// within the window.
class Twice final : public Mitigation {
public:
    Twice(const BaselineConfig& cfg, const TimingConfig& timing)
        : table_(cfg.capacity, timing.rows_per_bank),
          life_(cfg.capacity, 0),
          window_cmds_(timing.refresh_cmds_per_window),
          blast_radius_(cfg.blast_radius),
          rows_per_bank_(timing.rows_per_bank) {
        threshold_ = cfg.twice_trr_threshold > 0 ? cfg.twice_trr_threshold
                                                 : timing.rh_threshold / 4;
    }

    std::optional<TrrAction> on_activation(row_t row, picos_t, picos_t) override;
    TrrAction on_refresh(std::uint64_t cmd_index, picos_t) override;

    void reset_window(std::uint64_t) override {
        table_.clear();
        std::fill(life_.begin(), life_.end(), 0);
        pending_.clear();
    }

    std::string_view name() const override { return "twice"; }

    const CountTable& table() const { return table_; }

private:
    CountTable table_;
    std::vector<std::int64_t> life_;  // intervals since the slot was filled
    std::deque<row_t> pending_;
    std::int64_t threshold_ = 0;
    std::int64_t window_cmds_;
    int blast_radius_;
    std::int64_t rows_per_bank_;
};

// PARA: refresh the neighbors of the activated row with a small fixed
// probability. Stateless apart from the random stream.
class Para final : public Mitigation {
public:
    Para(const BaselineConfig& cfg, const TimingConfig& timing,
         std::uint64_t seed)
        : p_(cfg.para_probability),
          blast_radius_(cfg.blast_radius),
          rows_per_bank_(timing.rows_per_bank),
          rng_(seed) {}

    std::optional<TrrAction> on_activation(row_t row, picos_t, picos_t) override {
        if (rng_.next_double() < p_) {
            TrrAction a;
            a.aggressor = row;
            a.victims = victims_of(row, blast_radius_, rows_per_bank_);
            return a;
        }
        return std::nullopt;
    }

    TrrAction on_refresh(std::uint64_t cmd_index, picos_t) override {
        TrrAction a;
        a.refresh_cmd_index = cmd_index;
        return a;
    }

    void reset_window(std::uint64_t w) override { rng_.reseed_per_window(w); }
    std::string_view name() const override { return "para"; }

private:
    double p_;
    int blast_radius_;
    std::int64_t rows_per_bank_;
    RandomSource rng_;
};

// PRoHIT: a cold table fed by misses (random eviction when full) and a
// fixed-slot hot table; hits climb one slot per promotion draw. The refresh
// command refreshes the victims of the highest occupied hot slot.
class Prohit final : public Mitigation {
public:
    Prohit(const BaselineConfig& cfg, const TimingConfig& timing,
           std::uint64_t seed)
        : cold_max_(cfg.prohit_cold_size),
          hot_(cfg.prohit_hot_size, kNoRow),
          p_promote_(cfg.prohit_promote_probability),
          blast_radius_(cfg.blast_radius),
          rows_per_bank_(timing.rows_per_bank),
          rng_(seed) {}

    std::optional<TrrAction> on_activation(row_t row, picos_t, picos_t) override;
    TrrAction on_refresh(std::uint64_t cmd_index, picos_t) override;

    void reset_window(std::uint64_t w) override {
        cold_.clear();
        std::fill(hot_.begin(), hot_.end(), kNoRow);
        rng_.reseed_per_window(w);
    }

    std::string_view name() const override { return "prohit"; }

    const std::vector<row_t>& hot() const { return hot_; }
    const std::vector<row_t>& cold() const { return cold_; }

private:
    std::vector<row_t> cold_;
    std::size_t cold_max_;
    std::vector<row_t> hot_;  // slot 0 is the top
    double p_promote_;
    int blast_radius_;
    std::int64_t rows_per_bank_;
    RandomSource rng_;
};

// MRLoc: victims of each activation pass through a FIFO; a victim seen again
// soon after its last enqueue is refreshed with probability proportional to
// its recency.
class Mrloc final : public Mitigation {
public:
    Mrloc(const BaselineConfig& cfg, const TimingConfig& timing,
          std::uint64_t seed)
        : queue_len_(cfg.mrloc_queue_length),
          scale_(cfg.mrloc_probability_scale),
          blast_radius_(cfg.blast_radius),
          rows_per_bank_(timing.rows_per_bank),
          rng_(seed) {}

    std::optional<TrrAction> on_activation(row_t row, picos_t, picos_t) override;

    TrrAction on_refresh(std::uint64_t cmd_index, picos_t) override {
        TrrAction a;
        a.refresh_cmd_index = cmd_index;
        return a;
    }

    void reset_window(std::uint64_t w) override {
        last_enqueue_.clear();
        seq_ = 0;
        rng_.reseed_per_window(w);
    }

    std::string_view name() const override { return "mrloc"; }

    // TRR probability for a victim last enqueued `dist` activations ago.
    double trr_probability(std::uint64_t dist) const {
        if (dist >= queue_len_) return 0.0;
        return scale_ * (1.0 - static_cast<double>(dist) /
                                   static_cast<double>(queue_len_));
    }

private:
    std::unordered_map<row_t, std::uint64_t> last_enqueue_;
    std::uint64_t seq_ = 0;
    std::size_t queue_len_;
    double scale_;
    int blast_radius_;
    std::int64_t rows_per_bank_;
    RandomSource rng_;
};

}  // namespace rhsim
