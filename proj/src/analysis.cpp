#include "rhsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "rhsim/dsac.hpp"
#include "rhsim/random.hpp"
#include "rhsim/sim.hpp"

namespace rhsim {

double LogProb::value() const { return std::exp(log_e); }
double LogProb::log10() const { return log_e / std::log(10.0); }

std::int64_t error_bound_space_saving(std::int64_t n, std::int64_t c) {
    if (c < 1) throw config_error("counters must be >= 1");
    return n / c;
}

double min_count_upper_bound(const AnalysisParams& p) {
    p.validate();
    return (static_cast<double>(p.rh_threshold) / 2.0 -
            static_cast<double>(p.mpa_refi)) /
           static_cast<double>(p.counters);
}

LogProb p_consecutive_filter(const AnalysisParams& p) {
    const double m = min_count_upper_bound(p);
    const double pr = replacement_probability(m);
    const double exponent = static_cast<double>(p.rh_threshold) / 2.0;
    return {exponent * std::log1p(-pr)};
}

LogProb p_filter_general(
    const std::vector<std::pair<std::int64_t, double>>& weights,
    const AnalysisParams& p) {
    double total = 0.0;
    for (const auto& [cx, o] : weights) {
        if (cx < 1 || o <= 0.0 || o > 1.0)
            throw input_error("weight classes need count >= 1 and proportion in (0,1]");
        total += o * static_cast<double>(cx);
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw input_error("weight proportions must sum to 1");

    const double m = min_count_upper_bound(p);
    const double pr = replacement_probability(m);
    const double exponent = static_cast<double>(p.rh_threshold) / 2.0;

    // log-sum-exp over ln(Cx_k) + (RH/2) ln(1 - o_k P(r))
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(weights.size());
    for (const auto& [cx, o] : weights) {
        const double t = std::log(static_cast<double>(cx)) +
                         exponent * std::log1p(-o * pr);
        terms.push_back(t);
        max_term = std::max(max_term, t);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return {max_term + std::log(acc)};
}

double reliability(double t_seconds, double lambda_per_second) {
    if (lambda_per_second <= 0.0) throw input_error("lambda must be positive");
    return std::exp(-lambda_per_second * t_seconds);
}

double lifetime_for(double target_reliability, double lambda_per_second) {
    if (lambda_per_second <= 0.0) throw input_error("lambda must be positive");
    if (target_reliability <= 0.0 || target_reliability >= 1.0)
        throw input_error("target reliability must be in (0, 1)");
    return -std::log(target_reliability) / lambda_per_second;
}

std::int64_t required_counters_graphene(const TimingConfig& cfg) {
    const double mpa_w = static_cast<double>(cfg.mpa_per_refw());
    const double denom = static_cast<double>(cfg.rh_threshold) / 4.0 + 1.0;
    return static_cast<std::int64_t>(std::ceil(mpa_w / denom - 1.0));
}

double cat_two_per_level(const TimingConfig& cfg, std::int64_t rh_threshold) {
    return static_cast<double>(cfg.mpa_per_refw()) /
           static_cast<double>(rh_threshold);
}

double required_counters_cat_two(const TimingConfig& cfg, std::int64_t levels,
                                 std::int64_t roots,
                                 std::int64_t rh_threshold) {
    return cat_two_per_level(cfg, rh_threshold) * static_cast<double>(levels) +
           static_cast<double>(roots);
}

double required_counters_twice(const TimingConfig& cfg) {
    const double cmds = static_cast<double>(cfg.refresh_cmds_per_window);
    double harmonic = 0.0;
    for (std::int64_t n = cfg.refresh_cmds_per_window; n >= 1; --n)
        harmonic += 1.0 / static_cast<double>(n);
    const double sum = cmds / static_cast<double>(cfg.rh_threshold) * harmonic;
    return static_cast<double>(cfg.mpa_per_refi()) * (1.0 + sum);
}

double mc_consecutive_filter(const AnalysisParams& p, std::int64_t trials,
                             std::uint64_t seed) {
    const double pr = replacement_probability(min_count_upper_bound(p));
    const std::int64_t draws = p.rh_threshold / 2;
    RandomSource rng(seed);
    std::int64_t failures = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        bool admitted = false;
        for (std::int64_t k = 0; k < draws; ++k) {
            if (rng.next_double() <= pr) {
                admitted = true;
                break;
            }
        }
        if (!admitted) ++failures;
    }
    return static_cast<double>(failures) / static_cast<double>(trials);
}

double mc_filter_general(
    const std::vector<std::pair<std::int64_t, double>>& weights,
    const AnalysisParams& p, std::int64_t trials, std::uint64_t seed) {
    const double pr = replacement_probability(min_count_upper_bound(p));
    const std::int64_t acts = p.rh_threshold / 2;

    // Expand classes into individual rows with their pick proportions.
    std::vector<double> pick;
    for (const auto& [cx, o] : weights)
        for (std::int64_t i = 0; i < cx; ++i) pick.push_back(o);
    std::vector<double> cumulative(pick.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pick.size(); ++i) {
        acc += pick[i];
        cumulative[i] = acc;
    }

    RandomSource rng(seed);
    std::vector<char> admitted(pick.size());
    double total_unadmitted = 0.0;
    for (std::int64_t t = 0; t < trials; ++t) {
        std::fill(admitted.begin(), admitted.end(), 0);
        for (std::int64_t a = 0; a < acts; ++a) {
            const double u = rng.next_double() * acc;
            const auto it =
                std::lower_bound(cumulative.begin(), cumulative.end(), u);
            const auto idx = std::min<std::size_t>(
                static_cast<std::size_t>(it - cumulative.begin()),
                pick.size() - 1);
            if (!admitted[idx] && rng.next_double() <= pr) admitted[idx] = 1;
        }
        for (char f : admitted)
            if (!f) total_unadmitted += 1.0;
    }
    return total_unadmitted / static_cast<double>(trials);
}

WorstPatternReport worst_pattern_experiment(
    const TimingConfig& timing, const TrackerParams& params,
    std::int64_t n_rows, const std::vector<double>& zipf_exponents,
    std::int64_t windows, const std::vector<std::uint64_t>& seeds,
    int threads) {
    WorstPatternReport report;

    auto run_family = [&](WeightKind weights, double s,
                          const std::string& label) {
        PatternSpec spec;
        spec.kind = PatternKind::weighted;
        spec.weights = weights;
        spec.zipf_s = s;
        spec.n_rows = n_rows;
        SweepAxis axis;
        axis.trackers = {"dsac"};
        axis.seeds = seeds;
        RunConfig rc;
        rc.windows = windows;
        const SweepResult r = sweep(timing, spec, axis, params, rc, threads);
        WorstPatternFamily fam;
        fam.label = label;
        double sum = 0.0;
        for (const auto& rep : r.reports) {
            fam.maxima.push_back(rep.overall_max);
            sum += rep.overall_max;
        }
        fam.mean_of_max = sum / static_cast<double>(fam.maxima.size());
        double var = 0.0;
        for (auto m : fam.maxima) {
            const double d = m - fam.mean_of_max;
            var += d * d;
        }
        if (fam.maxima.size() > 1) {
            var /= static_cast<double>(fam.maxima.size() - 1);
            fam.stderr_of_max =
                std::sqrt(var / static_cast<double>(fam.maxima.size()));
        }
        report.families.push_back(std::move(fam));
    };

    run_family(WeightKind::uniform, 0.0, "uniform");
    for (double s : zipf_exponents)
        run_family(WeightKind::zipf, s, "zipf" + std::to_string(s).substr(0, 3));

    report.uniform_is_worst = true;
    for (std::size_t i = 1; i < report.families.size(); ++i)
        if (report.families[i].mean_of_max > report.families[0].mean_of_max)
            report.uniform_is_worst = false;
    return report;
}

}  // namespace rhsim
