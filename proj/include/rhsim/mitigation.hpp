#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rhsim/count_table.hpp"
#include "rhsim/timing.hpp"

namespace rhsim {

// A tracker's response at (or between) refresh commands: the detected
// aggressor and the neighbor rows to refresh. Default-constructed = no-op.
struct TrrAction {
    std::optional<row_t> aggressor;
    std::vector<row_t> victims;
    std::uint64_t refresh_cmd_index = 0;

    bool no_op() const { return !aggressor.has_value(); }
};

// Victim rows aggressor+-1..+-blast_radius, clipped to [0, rows_per_bank).
inline std::vector<row_t> victims_of(row_t aggressor, int blast_radius,
                                     std::int64_t rows_per_bank) {
    std::vector<row_t> v;
    v.reserve(2 * static_cast<std::size_t>(blast_radius));
    for (int d = blast_radius; d >= 1; --d) {
        const std::int64_t below = static_cast<std::int64_t>(aggressor) - d;
        if (below >= 0) v.push_back(static_cast<row_t>(below));
    }
    for (int d = 1; d <= blast_radius; ++d) {
        const std::int64_t above = static_cast<std::int64_t>(aggressor) + d;
        if (above < rows_per_bank) v.push_back(static_cast<row_t>(above));
    }
    return v;
}

// Contract shared by DSAC and every baseline. A tracker instance is owned by
// exactly one simulation; it never observes wall time beyond these calls.
class Mitigation {
public:
    virtual ~Mitigation() = default;

    // Probabilistic trackers (PARA, MRLoc) may mitigate immediately.
    virtual std::optional<TrrAction> on_activation(row_t row, picos_t tras,
                                                   picos_t now) = 0;
    virtual TrrAction on_refresh(std::uint64_t cmd_index, picos_t now) = 0;
    virtual void reset_window(std::uint64_t window_index) = 0;
    virtual std::string_view name() const = 0;
};

}  // namespace rhsim
