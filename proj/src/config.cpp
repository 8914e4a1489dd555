#include "rhsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rhsim {

namespace {

bool parse_bool(const std::string& v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw config_error("expected boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

}  // namespace

const std::vector<std::string>& known_trackers() {
    static const std::vector<std::string> names = {
        "dsac", "space_saving", "graphene", "twice", "para", "prohit", "mrloc",
        "none"};
    return names;
}

bool is_counter_based(const std::string& name) {
    return name == "dsac" || name == "space_saving" || name == "graphene" ||
           name == "twice";
}

namespace {

// Tracking disabled; the unmitigated reference.
class NoMitigation final : public Mitigation {
public:
    std::optional<TrrAction> on_activation(row_t, picos_t, picos_t) override {
        return std::nullopt;
    }
    TrrAction on_refresh(std::uint64_t cmd_index, picos_t) override {
        TrrAction a;
        a.refresh_cmd_index = cmd_index;
        return a;
    }
    void reset_window(std::uint64_t) override {}
    std::string_view name() const override { return "none"; }
};

}  // namespace

std::unique_ptr<Mitigation> make_tracker(const std::string& name,
                                         const TrackerParams& params,
                                         const TimingConfig& timing,
                                         std::uint64_t seed) {
    if (name == "dsac") return std::make_unique<Dsac>(params.dsac, timing, seed);
    if (name == "space_saving")
        return std::make_unique<SpaceSaving>(params.baseline, timing);
    if (name == "graphene")
        return std::make_unique<Graphene>(params.baseline, timing);
    if (name == "twice") return std::make_unique<Twice>(params.baseline, timing);
    if (name == "para")
        return std::make_unique<Para>(params.baseline, timing, seed);
    if (name == "prohit")
        return std::make_unique<Prohit>(params.baseline, timing, seed);
    if (name == "mrloc")
        return std::make_unique<Mrloc>(params.baseline, timing, seed);
    if (name == "none") return std::make_unique<NoMitigation>();
    throw config_error("unknown tracker '" + name + "'");
}

void ExperimentConfig::validate() const {
    timing.validate();
    params.dsac.validate();
    params.baseline.validate();
    if (seeds.empty()) throw config_error("run.seeds must not be empty");
    if (windows < 1) throw config_error("run.windows must be >= 1");
    if (trackers.empty()) throw config_error("run.trackers must not be empty");
    const auto& known = known_trackers();
    for (const auto& t : trackers) {
        if (std::find(known.begin(), known.end(), t) == known.end())
            throw config_error("run.trackers: unknown tracker '" + t + "'");
    }
    for (const auto& t : sweep.trackers) {
        if (std::find(known.begin(), known.end(), t) == known.end())
            throw config_error("sweep.trackers: unknown tracker '" + t + "'");
    }
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    for (const auto& part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(std::stoll(part));
            continue;
        }
        const std::int64_t lo = std::stoll(part.substr(0, dots));
        std::string rest = part.substr(dots + 2);
        std::int64_t step = 1;
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
            step = std::stoll(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const std::int64_t hi = std::stoll(rest);
        if (step < 1) throw config_error("list step must be >= 1");
        for (std::int64_t v = lo; v <= hi; v += step) out.push_back(v);
    }
    return out;
}

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
    ExperimentConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    double mr4_value = 4.0;
    bool saw_mr4 = false;

    auto fail = [&](const std::string& msg) -> void {
        throw config_error(origin + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (section == "timing") {
                if (key == "trefi_ns") cfg.timing.trefi = parse_ns(value);
                else if (key == "mr4") { mr4_value = std::stod(value); saw_mr4 = true; }
                else if (key == "trfc_ns") cfg.timing.trfc = parse_ns(value);
                else if (key == "trc_min_ns") cfg.timing.trc_min = parse_ns(value);
                else if (key == "tras_min_ns") cfg.timing.tras_min = parse_ns(value);
                else if (key == "refresh_cmds_per_window")
                    cfg.timing.refresh_cmds_per_window = std::stoll(value);
                else if (key == "rows_per_bank")
                    cfg.timing.rows_per_bank = std::stoll(value);
                else if (key == "rh_threshold")
                    cfg.timing.rh_threshold = std::stoll(value);
                else fail("unknown timing key '" + key + "'");
            } else if (section == "dsac") {
                if (key == "capacity") cfg.params.dsac.capacity = std::stoul(value);
                else if (key == "alpha") cfg.params.dsac.alpha = std::stod(value);
                else if (key == "blast_radius")
                    cfg.params.dsac.blast_radius = std::stoi(value);
                else if (key == "trr_mpa_term")
                    cfg.params.dsac.trr_mpa_term = std::stoll(value);
                else if (key == "integer_counts")
                    cfg.params.dsac.integer_counts = parse_bool(value);
                else if (key == "rng") {
                    if (value == "exact") cfg.params.dsac.rng_mode = RngMode::exact_uniform;
                    else if (value == "lfsr20") cfg.params.dsac.rng_mode = RngMode::lfsr20;
                    else fail("rng must be 'exact' or 'lfsr20'");
                } else fail("unknown dsac key '" + key + "'");
            } else if (section == "baselines") {
                if (key == "capacity") cfg.params.baseline.capacity = std::stoul(value);
                else if (key == "blast_radius")
                    cfg.params.baseline.blast_radius = std::stoi(value);
                else fail("unknown baselines key '" + key + "'");
            } else if (section == "graphene") {
                if (key == "trr_threshold")
                    cfg.params.baseline.graphene_trr_threshold = std::stoll(value);
                else fail("unknown graphene key '" + key + "'");
            } else if (section == "twice") {
                if (key == "trr_threshold")
                    cfg.params.baseline.twice_trr_threshold = std::stoll(value);
                else fail("unknown twice key '" + key + "'");
            } else if (section == "para") {
                if (key == "probability")
                    cfg.params.baseline.para_probability = std::stod(value);
                else fail("unknown para key '" + key + "'");
            } else if (section == "prohit") {
                if (key == "cold_size")
                    cfg.params.baseline.prohit_cold_size = std::stoul(value);
                else if (key == "hot_size")
                    cfg.params.baseline.prohit_hot_size = std::stoul(value);
                else if (key == "promote_probability")
                    cfg.params.baseline.prohit_promote_probability = std::stod(value);
                else fail("unknown prohit key '" + key + "'");
            } else if (section == "mrloc") {
                if (key == "queue_length")
                    cfg.params.baseline.mrloc_queue_length = std::stoul(value);
                else if (key == "probability_scale")
                    cfg.params.baseline.mrloc_probability_scale = std::stod(value);
                else fail("unknown mrloc key '" + key + "'");
            } else if (section == "pattern") {
                if (key == "kind") cfg.pattern.kind = pattern_kind_from(value);
                else if (key == "n_rows") cfg.pattern.n_rows = std::stoll(value);
                else if (key == "side") {
                    if (value == "double") cfg.pattern.side = PatternSide::double_sided;
                    else if (value == "single") cfg.pattern.side = PatternSide::single;
                    else fail("side must be 'single' or 'double'");
                } else if (key == "weights") {
                    if (value == "uniform") cfg.pattern.weights = WeightKind::uniform;
                    else if (value == "zipf") cfg.pattern.weights = WeightKind::zipf;
                    else if (value == "explicit")
                        cfg.pattern.weights = WeightKind::explicit_list;
                    else fail("weights must be uniform, zipf or explicit");
                } else if (key == "zipf_s") cfg.pattern.zipf_s = std::stod(value);
                else if (key == "weight_list") {
                    cfg.pattern.explicit_weights.clear();
                    for (const auto& w : split(value, ','))
                        cfg.pattern.explicit_weights.push_back(std::stod(w));
                } else if (key == "base_row")
                    cfg.pattern.base_row = static_cast<row_t>(std::stoul(value));
                else if (key == "tras_ns") cfg.pattern.tras = parse_ns(value);
                else if (key == "decoy_count")
                    cfg.pattern.decoy_count = std::stoll(value);
                else if (key == "trace") cfg.pattern.trace_path = value;
                else fail("unknown pattern key '" + key + "'");
            } else if (section == "run") {
                if (key == "trackers") cfg.trackers = split(value, ',');
                else if (key == "seeds") {
                    cfg.seeds.clear();
                    for (auto s : parse_int_list(value))
                        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
                } else if (key == "windows") cfg.windows = std::stoll(value);
                else if (key == "window_reset") cfg.window_reset = parse_bool(value);
                else if (key == "out") cfg.out_path = value;
                else fail("unknown run key '" + key + "'");
            } else if (section == "sweep") {
                if (key == "n_rows") cfg.sweep.n_rows = parse_int_list(value);
                else if (key == "counters") cfg.sweep.counters = parse_int_list(value);
                else if (key == "trackers") cfg.sweep.trackers = split(value, ',');
                else if (key == "patterns") {
                    cfg.sweep.patterns.clear();
                    for (const auto& p : split(value, ','))
                        cfg.sweep.patterns.push_back(pattern_kind_from(p));
                } else fail("unknown sweep key '" + key + "'");
            } else {
                fail("unknown section '" + section + "'");
            }
        } catch (const config_error&) {
            throw;
        } catch (const std::exception& e) {
            fail(std::string("bad value: ") + e.what());
        }
    }

    if (saw_mr4) cfg.timing.mr4 = Mr4Multiplier::from_double(mr4_value);
    cfg.params.dsac.rh_threshold = cfg.timing.rh_threshold;
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config '" + path + "'");
    return parse_config(in, path);
}

}  // namespace rhsim
