#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rhsim {

// All time is kept in integer picoseconds so that every supported refresh
// multiplier (including 0.5x applied to tREFI = 3906.25ns) stays exact.
using picos_t = std::int64_t;

inline constexpr picos_t kPicosPerNs = 1000;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Refresh interval multiplier, expressed as an exact rational.
struct Mr4Multiplier {
    int num = 4;
    int den = 1;

    static Mr4Multiplier from_double(double v);
    double value() const { return static_cast<double>(num) / den; }
};

// Per-bank refresh/activation timing plus the Rowhammer threshold.
// Defaults are the LPDDR4 MR4-4x operating point.
struct TimingConfig {
    picos_t trefi = 3'906'250;             // 3906.25ns base interval, in ps
    Mr4Multiplier mr4{4, 1};
    picos_t trfc = 280 * kPicosPerNs;      // refresh operation time
    picos_t trc_min = 60 * kPicosPerNs;    // min activation command interval
    picos_t tras_min = 42 * kPicosPerNs;   // min row-active time
    std::int64_t refresh_cmds_per_window = 8192;
    std::int64_t rows_per_bank = 65536;
    std::int64_t rh_threshold = 20000;

    void validate() const;

    picos_t trefi_effective() const;
    picos_t trefw_effective() const;

    // Activation slots in one effective refresh interval, floored per interval.
    std::int64_t mpa_per_refi() const;
    // Activation budget of the whole window: the per-interval ratio is scaled
    // by the command count before the single floor, so fractional slack
    // accumulates (Table-1 convention: 255.75 * 8192 = 2,095,104).
    std::int64_t mpa_per_refw() const;
};

// Parses a decimal nanosecond literal ("3906.25") into picoseconds exactly.
// Rejects more than 3 fractional digits since those are not representable.
picos_t parse_ns(const std::string& text);

// Renders picoseconds as a minimal decimal nanosecond literal.
std::string format_ns(picos_t t);

}  // namespace rhsim
