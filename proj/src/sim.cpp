#include "rhsim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "rhsim/config.hpp"

namespace rhsim {

void DisturbanceReport::finish() {
    overall_max = 0;
    double sum = 0.0;
    for (auto m : window_max) {
        overall_max = std::max(overall_max, m);
        sum += m;
    }
    mean_window_max = window_max.empty() ? 0.0 : sum / window_max.size();
}

std::int64_t refresh_work_budget(const TimingConfig& timing) {
    return timing.trfc / timing.trc_min;
}

bool refresh_budget_sufficient(const TimingConfig& timing, int blast_radius) {
    return refresh_work_budget(timing) >= 1 + 2 * blast_radius;
}

DisturbanceReport run_simulation(const TimingConfig& timing,
                                 const PatternSpec& pattern,
                                 Mitigation& tracker,
                                 const RunConfig& run,
                                 std::int64_t counters_label) {
    timing.validate();
    PatternStream stream(pattern, timing, run.seed);
    DisturbanceLedger ledger(timing.rows_per_bank);

    DisturbanceReport report;
    report.algorithm = tracker.name();
    report.pattern = pattern.describe();
    report.n_rows = pattern.n_rows;
    report.counters = counters_label;
    report.seed = run.seed;
    report.window_max.reserve(static_cast<std::size_t>(run.windows));

    const picos_t trefie = timing.trefi_effective();
    const std::int64_t cmds = timing.refresh_cmds_per_window;
    const std::int64_t flip_threshold =
        pattern.side == PatternSide::double_sided ? timing.rh_threshold / 2
                                                  : timing.rh_threshold;

    auto apply = [&](const TrrAction& action) {
        if (action.no_op()) return;
        ++report.trr_count;
        ledger.reset_row(*action.aggressor);
    };

    std::uint64_t cmd_index = 0;
    for (std::int64_t w = 0; w < run.windows; ++w) {
        if (run.window_reset && w > 0) ledger.reset_all();
        ledger.begin_window();
        tracker.reset_window(static_cast<std::uint64_t>(w));

        for (std::int64_t i = 0; i < cmds; ++i, ++cmd_index) {
            const picos_t t0 =
                static_cast<picos_t>(cmd_index) * trefie;
            apply(tracker.on_refresh(cmd_index, t0));

            const auto& rows = stream.next_interval();
            picos_t t = t0 + timing.trfc;
            for (std::size_t k = 0; k < rows.size(); ++k, t += timing.trc_min) {
                ledger.record(rows[k]);
                auto immediate =
                    tracker.on_activation(rows[k], stream.tras_at(k), t);
                if (immediate) apply(*immediate);
            }
        }
        report.window_max.push_back(ledger.window_max());
        if (ledger.window_max() >= flip_threshold) report.bitflip = true;
    }
    report.finish();
    return report;
}

std::string csv_header() {
    return "algo,pattern,n_rows,counters,seed,window,max_disturbance,"
           "avg_disturbance,trr_count,bitflip\n";
}

void append_csv(std::string& out, const DisturbanceReport& r) {
    char buf[256];
    double running = 0.0;
    for (std::size_t w = 0; w < r.window_max.size(); ++w) {
        running += r.window_max[w];
        std::snprintf(buf, sizeof buf, "%s,%s,%lld,%lld,%llu,%zu,%u,%.2f,%llu,%d\n",
                      r.algorithm.c_str(), r.pattern.c_str(),
                      static_cast<long long>(r.n_rows),
                      static_cast<long long>(r.counters),
                      static_cast<unsigned long long>(r.seed), w,
                      r.window_max[w], running / static_cast<double>(w + 1),
                      static_cast<unsigned long long>(r.trr_count),
                      r.bitflip ? 1 : 0);
        out += buf;
    }
}

SweepResult sweep(const TimingConfig& timing, const PatternSpec& base_pattern,
                  const SweepAxis& axis, const TrackerParams& params,
                  const RunConfig& run, int threads) {
    SweepAxis ax = axis;
    if (ax.n_rows.empty()) ax.n_rows = {base_pattern.n_rows};
    if (ax.counters.empty())
        ax.counters = {static_cast<std::int64_t>(params.dsac.capacity)};
    if (ax.seeds.empty()) ax.seeds = {run.seed};
    if (ax.trackers.empty()) ax.trackers = {"dsac"};
    if (ax.patterns.empty()) ax.patterns = {base_pattern.kind};

    struct Task {
        PatternKind pattern;
        std::string tracker;
        std::int64_t counters;
        std::int64_t n_rows;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (auto pk : ax.patterns)
        for (const auto& tr : ax.trackers)
            for (auto c : ax.counters)
                for (auto n : ax.n_rows)
                    for (auto s : ax.seeds)
                        tasks.push_back({pk, tr, c, n, s});

    std::vector<DisturbanceReport> reports(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            PatternSpec spec = base_pattern;
            spec.kind = t.pattern;
            spec.n_rows = t.n_rows;
            TrackerParams p = params;
            p.dsac.capacity = static_cast<std::size_t>(t.counters);
            p.baseline.capacity = static_cast<std::size_t>(t.counters);
            RunConfig rc = run;
            rc.seed = t.seed;
            auto tracker = make_tracker(t.tracker, p, timing, t.seed);
            reports[i] = run_simulation(timing, spec, *tracker, rc, t.counters);
        }
    };

    int n_threads = threads > 0
                        ? threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min<int>(n_threads, static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    SweepResult result;
    result.reports = std::move(reports);

    // Table-6 shape: per (tracker, pattern, counters), the per-n_rows maxima
    // reduced to their mean (Average) and max (Maximum).
    std::size_t idx = 0;
    for (auto pk : ax.patterns)
        for (const auto& tr : ax.trackers)
            for (auto c : ax.counters) {
                SweepSummary s;
                s.algorithm = tr;
                s.pattern = pk;
                s.counters = c;
                double sum = 0.0;
                for (std::size_t ni = 0; ni < ax.n_rows.size(); ++ni) {
                    std::uint32_t config_max = 0;
                    for (std::size_t si = 0; si < ax.seeds.size(); ++si, ++idx)
                        config_max = std::max(config_max,
                                              result.reports[idx].overall_max);
                    sum += config_max;
                    s.maximum = std::max(s.maximum, config_max);
                }
                s.average = sum / static_cast<double>(ax.n_rows.size());
                result.summaries.push_back(s);
            }
    return result;
}

}  // namespace rhsim
