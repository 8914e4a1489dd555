#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhsim/config.hpp"
#include "rhsim/timing.hpp"

namespace rhsim {

struct AnalysisParams {
    std::int64_t counters = 20;
    std::int64_t rh_threshold = 20000;
    std::int64_t mpa_refi = 256;  // MPA_tREFIe term, rounded up by default

    void validate() const {
        if (counters < 1) throw config_error("counters must be >= 1");
        if (static_cast<double>(mpa_refi) >= rh_threshold / 2.0)
            throw config_error("rh_threshold/2 must exceed mpa_refi");
    }
};

// Probability carried in log space; consecutive-filtering odds underflow a
// double well before the interesting counter range ends.
struct LogProb {
    double log_e = 0.0;

    double value() const;
    double log10() const;
};

// Space Saving count error bound, floor(n/c).
std::int64_t error_bound_space_saving(std::int64_t n, std::int64_t c);

// Largest minimum count the adaptive TRR threshold allows: (RH/2 - MPA)/c.
double min_count_upper_bound(const AnalysisParams& p);

// Probability that one aggressor is filtered RH/2 times consecutively,
// evaluated at the minimum-count upper bound.
LogProb p_consecutive_filter(const AnalysisParams& p);

// Multi-row generalization: sum of Cx_k * (1 - o_k * P(r))^(RH/2) over
// weight classes (count, proportion).
LogProb p_filter_general(const std::vector<std::pair<std::int64_t, double>>& weights,
                         const AnalysisParams& p);

double reliability(double t_seconds, double lambda_per_second);
double lifetime_for(double target_reliability, double lambda_per_second);

// Required counter counts quoted for the related trackers.
std::int64_t required_counters_graphene(const TimingConfig& cfg);
double cat_two_per_level(const TimingConfig& cfg, std::int64_t rh_threshold);
double required_counters_cat_two(const TimingConfig& cfg, std::int64_t levels,
                                 std::int64_t roots, std::int64_t rh_threshold);
double required_counters_twice(const TimingConfig& cfg);

// Monte Carlo oracles for the closed forms above.

// Fraction of `trials` in which `rh_threshold/2` consecutive admission draws
// at probability 1/(min_bound+1) all fail.
double mc_consecutive_filter(const AnalysisParams& p, std::int64_t trials,
                             std::uint64_t seed);

// Mean number of weight classes' rows never admitted across RH/2 total
// activations whose actor is drawn by proportion (the Eq.-11 experiment).
double mc_filter_general(const std::vector<std::pair<std::int64_t, double>>& weights,
                         const AnalysisParams& p, std::int64_t trials,
                         std::uint64_t seed);

struct WorstPatternFamily {
    std::string label;
    double mean_of_max = 0.0;
    double stderr_of_max = 0.0;
    std::vector<std::uint32_t> maxima;  // one per seed
};

struct WorstPatternReport {
    std::vector<WorstPatternFamily> families;  // families[0] is uniform
    bool uniform_is_worst = false;
};

// Lemma-1 experiment: DSAC under double-sided uniform vs Zipf weight
// patterns at equal activation budget.
WorstPatternReport worst_pattern_experiment(const TimingConfig& timing,
                                            const TrackerParams& params,
                                            std::int64_t n_rows,
                                            const std::vector<double>& zipf_exponents,
                                            std::int64_t windows,
                                            const std::vector<std::uint64_t>& seeds,
                                            int threads = 0);

}  // namespace rhsim
