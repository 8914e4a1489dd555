#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rhsim/count_table.hpp"
#include "rhsim/random.hpp"
#include "rhsim/timing.hpp"

namespace rhsim {

struct pattern_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PatternKind {
    trrespass,
    random,
    decoy_flood,
    graphene_adversarial,
    weighted,
    trace,
};

enum class PatternSide { single, double_sided };

enum class WeightKind { uniform, zipf, explicit_list };

struct PatternSpec {
    PatternKind kind = PatternKind::trrespass;
    std::int64_t n_rows = 1;          // aggressor rows
    PatternSide side = PatternSide::double_sided;
    WeightKind weights = WeightKind::uniform;
    double zipf_s = 1.0;
    std::vector<double> explicit_weights;
    row_t base_row = 1;
    picos_t tras = 0;                 // 0: use tRASmin
    std::int64_t decoy_count = 0;     // decoy_flood: decoys per interval half
    std::string trace_path;

    std::string describe() const;
};

struct ActivationEvent {
    picos_t time = 0;
    row_t row = 0;
    picos_t tras = 0;
};

PatternKind pattern_kind_from(const std::string& name);
std::string to_string(PatternKind kind);

// Aggressor rows laid out double-sided: disjoint victim triples
// (v-1, v, v+1) spaced so no aggressor falls inside another victim's blast
// radius. Single-sided layouts space lone aggressors the same way.
std::vector<row_t> aggressor_layout(const PatternSpec& spec,
                                    const TimingConfig& cfg,
                                    int blast_radius = 2);

// Streams one tREFIe interval at a time. Generators are pure functions of
// (spec, cfg, seed); produced rows land on the layout above.
class PatternStream {
public:
    PatternStream(const PatternSpec& spec, const TimingConfig& cfg,
                  std::uint64_t seed);

    // Rows activated within one interval, in delivery order.
    const std::vector<row_t>& next_interval();

    picos_t tras() const { return tras_; }
    // Per-event tRAS of the interval just produced (traces carry their own).
    picos_t tras_at(std::size_t k) const {
        return tras_buffer_.empty() ? tras_ : tras_buffer_[k];
    }
    const std::vector<row_t>& aggressors() const { return aggressors_; }

private:
    void fill_round_robin();
    void fill_decoy_flood();
    void fill_graphene_adversarial();
    void fill_weighted();
    void fill_trace_interval();

    PatternSpec spec_;
    TimingConfig cfg_;
    RandomSource rng_;
    std::vector<row_t> aggressors_;
    std::vector<double> cumulative_;  // weighted mode
    std::vector<row_t> buffer_;
    std::vector<picos_t> tras_buffer_;  // trace mode only
    std::vector<ActivationEvent> trace_;
    std::size_t trace_pos_ = 0;
    std::int64_t slots_ = 0;
    std::int64_t interval_ = 0;
    std::uint64_t rr_phase_ = 0;
    picos_t tras_ = 0;
    row_t decoy_next_ = 0;
};

// Plain-text trace: one `time_ns,row,tras_ns` record per line, `#` comments,
// optional header. Events must be in nondecreasing time order.
std::vector<ActivationEvent> load_trace(const std::string& path);
std::vector<ActivationEvent> parse_trace(std::istream& in,
                                         const std::string& origin);
void dump_trace(std::ostream& out, const std::vector<ActivationEvent>& events);

// Materializes `windows` full windows of a generated pattern as timed events
// (used by dump-trace and the round-trip tests).
std::vector<ActivationEvent> materialize(const PatternSpec& spec,
                                         const TimingConfig& cfg,
                                         std::uint64_t seed,
                                         std::int64_t windows);

}  // namespace rhsim
