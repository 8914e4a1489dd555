#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rhsim/analysis.hpp"
#include "rhsim/config.hpp"
#include "rhsim/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

#ifndef RHSIM_PRESET_DIR
#define RHSIM_PRESET_DIR ""
#endif

std::string resolve_config(const std::string& config_path,
                           const std::string& preset) {
    if (!config_path.empty()) return config_path;
    if (preset.empty())
        throw rhsim::config_error("either --config or --preset is required");
    const std::string file = preset + ".cfg";
    for (const fs::path dir :
         {fs::path("presets"), fs::path(RHSIM_PRESET_DIR)}) {
        if (dir.empty()) continue;
        const fs::path candidate = dir / file;
        if (fs::exists(candidate)) return candidate.string();
    }
    throw rhsim::config_error("preset '" + preset + "' not found");
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open '" + path + "'");
    out << data;
    if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string out_path;
    std::int64_t windows = -1;
    std::int64_t seed = -1;
    std::string window_reset;
    int threads = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file");
        cmd->add_option("--preset", preset, "named preset from presets/");
        cmd->add_option("--out", out_path, "output path ('-' for stdout)");
        cmd->add_option("--windows", windows, "override run.windows");
        cmd->add_option("--seed", seed, "replace the seed list with one seed");
        cmd->add_option("--window-reset", window_reset,
                        "override ledger reset at window boundaries (on|off)")
            ->check(CLI::IsMember({"on", "off"}));
        cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    }

    rhsim::ExperimentConfig load() const {
        auto cfg = rhsim::load_config(resolve_config(config_path, preset));
        if (windows > 0) cfg.windows = windows;
        if (seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(seed)};
        if (window_reset == "on") cfg.window_reset = true;
        if (window_reset == "off") cfg.window_reset = false;
        if (!out_path.empty()) cfg.out_path = out_path;
        return cfg;
    }
};

std::string run_simulate(const rhsim::ExperimentConfig& cfg) {
    std::string csv = rhsim::csv_header();
    for (const auto& tracker_name : cfg.trackers) {
        for (auto seed : cfg.seeds) {
            auto tracker =
                rhsim::make_tracker(tracker_name, cfg.params, cfg.timing, seed);
            rhsim::RunConfig rc{cfg.windows, seed, cfg.window_reset};
            const auto counters =
                rhsim::is_counter_based(tracker_name)
                    ? static_cast<std::int64_t>(
                          tracker_name == "dsac" ? cfg.params.dsac.capacity
                                                 : cfg.params.baseline.capacity)
                    : 0;
            const auto report = rhsim::run_simulation(cfg.timing, cfg.pattern,
                                                      *tracker, rc, counters);
            rhsim::append_csv(csv, report);
        }
    }
    return csv;
}

std::string run_sweep(const rhsim::ExperimentConfig& cfg, int threads) {
    rhsim::SweepAxis axis = cfg.sweep;
    if (axis.trackers.empty()) axis.trackers = cfg.trackers;
    axis.seeds = cfg.seeds;
    rhsim::RunConfig rc{cfg.windows, cfg.seeds.front(), cfg.window_reset};
    const auto result =
        rhsim::sweep(cfg.timing, cfg.pattern, axis, cfg.params, rc, threads);

    std::string out = rhsim::csv_header();
    for (const auto& r : result.reports) rhsim::append_csv(out, r);
    out += "# summary: algo,pattern,counters,average,maximum\n";
    char buf[160];
    for (const auto& s : result.summaries) {
        std::snprintf(buf, sizeof buf, "# %s,%s,%lld,%.2f,%u\n",
                      s.algorithm.c_str(), rhsim::to_string(s.pattern).c_str(),
                      static_cast<long long>(s.counters), s.average, s.maximum);
        out += buf;
    }
    return out;
}

int run_analyze(CLI::App& app, const std::string& sub, std::int64_t counters,
                std::int64_t rh_threshold, std::int64_t mpa, double target,
                double lambda, const std::string& algo, std::int64_t levels,
                std::int64_t roots, std::int64_t n, const std::string& out_path) {
    (void)app;
    rhsim::AnalysisParams params{counters, rh_threshold, mpa};
    json j;
    j["inputs"] = {{"counters", counters},
                   {"rh_threshold", rh_threshold},
                   {"mpa_refi", mpa}};

    if (sub == "pf") {
        params.validate();
        const auto pf = rhsim::p_consecutive_filter(params);
        j["min_count_upper_bound"] = rhsim::min_count_upper_bound(params);
        j["p_f"] = pf.value();
        j["log10_p_f"] = pf.log10();
        j["ln_p_f"] = pf.log_e;
    } else if (sub == "reliability") {
        double l = lambda;
        if (l <= 0.0) {
            params.validate();
            l = rhsim::p_consecutive_filter(params).value();
        }
        j["inputs"]["lambda_per_second"] = l;
        j["inputs"]["target_reliability"] = target;
        const double seconds = rhsim::lifetime_for(target, l);
        j["lifetime_seconds"] = seconds;
        j["lifetime_days"] = seconds / 86400.0;
    } else if (sub == "counters") {
        rhsim::TimingConfig timing;
        timing.rh_threshold = rh_threshold;
        j["inputs"]["algorithm"] = algo;
        if (algo == "graphene") {
            j["required_counters"] = rhsim::required_counters_graphene(timing);
        } else if (algo == "cat_two") {
            j["per_level_rh"] = rhsim::cat_two_per_level(timing, rh_threshold);
            j["per_level_rh20480"] = rhsim::cat_two_per_level(timing, 20480);
            j["required_counters"] = rhsim::required_counters_cat_two(
                timing, levels, roots, rh_threshold);
            j["inputs"]["levels"] = levels;
            j["inputs"]["roots"] = roots;
        } else if (algo == "twice") {
            j["required_counters"] = rhsim::required_counters_twice(timing);
        } else {
            throw rhsim::config_error(
                "analyze counters: algorithm must be graphene, cat_two or twice");
        }
    } else if (sub == "bounds") {
        params.validate();
        j["inputs"]["n"] = n;
        j["space_saving_error_bound"] =
            rhsim::error_bound_space_saving(n, counters);
        j["min_count_upper_bound"] = rhsim::min_count_upper_bound(params);
    } else {
        throw rhsim::config_error("unknown analyze subcommand '" + sub + "'");
    }

    write_output(out_path.empty() ? "-" : out_path, j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-driven Rowhammer mitigation simulator"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    auto* cmd_sim = app.add_subcommand("simulate", "run one experiment");
    sim_opts.add_to(cmd_sim);

    CommonOpts sweep_opts;
    auto* cmd_sweep =
        app.add_subcommand("sweep", "cross-product of sweep axes + summary");
    sweep_opts.add_to(cmd_sweep);

    auto* cmd_analyze =
        app.add_subcommand("analyze", "closed-form security calculators");
    std::string analyze_sub, analyze_algo = "graphene", analyze_out;
    std::int64_t a_counters = 20, a_rh = 20000, a_mpa = 256, a_levels = 1,
                 a_roots = 1, a_n = 1000;
    double a_target = 0.999, a_lambda = 0.0;
    cmd_analyze
        ->add_option("subcommand", analyze_sub,
                     "pf | reliability | counters | bounds | worst-pattern")
        ->required();
    cmd_analyze->add_option("algorithm", analyze_algo,
                            "counters: graphene | cat_two | twice");
    cmd_analyze->add_option("--counters", a_counters, "tracker counters");
    cmd_analyze->add_option("--rh-threshold", a_rh, "Rowhammer threshold");
    cmd_analyze->add_option("--mpa", a_mpa, "MPA_tREFIe term");
    cmd_analyze->add_option("--target", a_target, "target reliability");
    cmd_analyze->add_option("--lambda", a_lambda,
                            "failure rate per second (default: P(f))");
    cmd_analyze->add_option("--levels", a_levels, "cat_two tree levels");
    cmd_analyze->add_option("--roots", a_roots, "cat_two roots");
    cmd_analyze->add_option("--n", a_n, "stream length for bounds");
    cmd_analyze->add_option("--out", analyze_out, "output path");
    std::int64_t wp_rows = 64, wp_windows = 1, wp_seeds = 10;
    cmd_analyze->add_option("--rows", wp_rows, "worst-pattern: aggressor rows");
    cmd_analyze->add_option("--windows", wp_windows, "worst-pattern: windows");
    cmd_analyze->add_option("--seeds", wp_seeds, "worst-pattern: seed count");

    CommonOpts trace_opts;
    auto* cmd_dump =
        app.add_subcommand("dump-trace", "materialize a pattern as a trace file");
    trace_opts.add_to(cmd_dump);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_sim->parsed()) {
            const auto cfg = sim_opts.load();
            write_output(cfg.out_path, run_simulate(cfg));
        } else if (cmd_sweep->parsed()) {
            const auto cfg = sweep_opts.load();
            write_output(cfg.out_path, run_sweep(cfg, sweep_opts.threads));
        } else if (cmd_dump->parsed()) {
            const auto cfg = trace_opts.load();
            const auto events = rhsim::materialize(
                cfg.pattern, cfg.timing, cfg.seeds.front(), cfg.windows);
            std::ostringstream os;
            rhsim::dump_trace(os, events);
            write_output(cfg.out_path, os.str());
        } else if (cmd_analyze->parsed()) {
            if (analyze_sub == "worst-pattern") {
                rhsim::TimingConfig timing;
                timing.rh_threshold = a_rh;
                rhsim::TrackerParams params;
                params.dsac.capacity = static_cast<std::size_t>(a_counters);
                params.dsac.rh_threshold = a_rh;
                std::vector<std::uint64_t> seeds;
                for (std::int64_t s = 1; s <= wp_seeds; ++s)
                    seeds.push_back(static_cast<std::uint64_t>(s));
                const auto report = rhsim::worst_pattern_experiment(
                    timing, params, wp_rows, {0.5, 1.0, 2.0}, wp_windows, seeds);
                json j;
                j["inputs"] = {{"counters", a_counters},
                               {"rh_threshold", a_rh},
                               {"rows", wp_rows},
                               {"windows", wp_windows},
                               {"seeds", wp_seeds}};
                for (const auto& fam : report.families) {
                    j["families"].push_back({{"label", fam.label},
                                             {"mean_of_max", fam.mean_of_max},
                                             {"stderr", fam.stderr_of_max}});
                }
                j["uniform_is_worst"] = report.uniform_is_worst;
                write_output(analyze_out.empty() ? "-" : analyze_out,
                             j.dump(2) + "\n");
            } else {
                return run_analyze(app, analyze_sub, a_counters, a_rh, a_mpa,
                                   a_target, a_lambda, analyze_algo, a_levels,
                                   a_roots, a_n, analyze_out);
            }
        }
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
