#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rhsim/baselines.hpp"
#include "rhsim/dsac.hpp"
#include "rhsim/patterns.hpp"
#include "rhsim/sim.hpp"
#include "rhsim/timing.hpp"

namespace rhsim {

// Per-algorithm knobs, one section each in the config file.
struct TrackerParams {
    DsacConfig dsac;
    BaselineConfig baseline;
};

std::unique_ptr<Mitigation> make_tracker(const std::string& name,
                                         const TrackerParams& params,
                                         const TimingConfig& timing,
                                         std::uint64_t seed);

bool is_counter_based(const std::string& name);
const std::vector<std::string>& known_trackers();

// A whole experiment: `[timing]`, one section per tracker, `[pattern]`,
// `[run]` and optional `[sweep]` axes. See presets/ for complete examples.
struct ExperimentConfig {
    TimingConfig timing;
    TrackerParams params;
    PatternSpec pattern;
    std::vector<std::string> trackers{"dsac"};
    std::vector<std::uint64_t> seeds{1};
    std::int64_t windows = 4;
    bool window_reset = true;
    std::string out_path;
    SweepAxis sweep;

    void validate() const;
};

// INI-style parser: `[section]`, `key = value`, `#` comments.
ExperimentConfig parse_config(std::istream& in, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

// Integer list syntax for sweep axes: "1,4,9" or "1..255" or "1..255:2".
std::vector<std::int64_t> parse_int_list(const std::string& text);

}  // namespace rhsim
