#include "rhsim/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rhsim {

std::string PatternSpec::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    if (kind == PatternKind::trace) {
        os << ":" << trace_path;
        return os.str();
    }
    os << ":n" << n_rows;
    if (kind == PatternKind::decoy_flood) os << ":d" << decoy_count;
    if (kind == PatternKind::weighted) {
        if (weights == WeightKind::zipf)
            os << ":zipf" << zipf_s;
        else if (weights == WeightKind::explicit_list)
            os << ":explicit";
        else
            os << ":uniform";
    }
    return os.str();
}

PatternKind pattern_kind_from(const std::string& name) {
    if (name == "trrespass") return PatternKind::trrespass;
    if (name == "random") return PatternKind::random;
    if (name == "decoy_flood") return PatternKind::decoy_flood;
    if (name == "graphene_adversarial") return PatternKind::graphene_adversarial;
    if (name == "weighted") return PatternKind::weighted;
    if (name == "trace") return PatternKind::trace;
    throw pattern_error("unknown pattern kind '" + name + "'");
}

std::string to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::trrespass: return "trrespass";
        case PatternKind::random: return "random";
        case PatternKind::decoy_flood: return "decoy_flood";
        case PatternKind::graphene_adversarial: return "graphene_adversarial";
        case PatternKind::weighted: return "weighted";
        case PatternKind::trace: return "trace";
    }
    return "?";
}

std::vector<row_t> aggressor_layout(const PatternSpec& spec,
                                    const TimingConfig& cfg,
                                    int blast_radius) {
    if (spec.n_rows < 1) throw pattern_error("n_rows must be >= 1");
    const std::int64_t stride = 2 * blast_radius + 3;
    std::vector<row_t> rows;
    rows.reserve(static_cast<std::size_t>(spec.n_rows));
    std::int64_t base = spec.base_row;
    if (base < 1) base = 1;
    if (spec.side == PatternSide::double_sided) {
        // Victim triples (v-1, v, v+1); an odd count leaves one lone aggressor.
        const std::int64_t victims = (spec.n_rows + 1) / 2;
        for (std::int64_t i = 0; i < victims; ++i) {
            const std::int64_t v = base + 1 + i * stride;
            rows.push_back(static_cast<row_t>(v - 1));
            if (static_cast<std::int64_t>(rows.size()) < spec.n_rows)
                rows.push_back(static_cast<row_t>(v + 1));
        }
    } else {
        for (std::int64_t i = 0; i < spec.n_rows; ++i)
            rows.push_back(static_cast<row_t>(base + i * stride));
    }
    if (rows.back() + blast_radius >= cfg.rows_per_bank)
        throw pattern_error("aggressor layout exceeds rows_per_bank");
    return rows;
}

PatternStream::PatternStream(const PatternSpec& spec, const TimingConfig& cfg,
                             std::uint64_t seed)
    : spec_(spec), cfg_(cfg), rng_(seed) {
    slots_ = cfg.mpa_per_refi();
    tras_ = spec.tras > 0 ? spec.tras : cfg.tras_min;
    if (tras_ < cfg.tras_min) throw pattern_error("pattern tRAS below tRASmin");

    if (spec_.kind == PatternKind::trace) {
        trace_ = load_trace(spec_.trace_path);
        return;
    }
    if (spec_.kind == PatternKind::graphene_adversarial ||
        spec_.kind == PatternKind::decoy_flood) {
        // layout only the hammered rows; decoys are appended at runtime
        aggressors_ = aggressor_layout(spec_, cfg_);
    } else {
        if (spec_.n_rows > slots_)
            throw pattern_error("n_rows exceeds activation slots per tREFIe");
        aggressors_ = aggressor_layout(spec_, cfg_);
    }
    if (spec_.kind == PatternKind::weighted) {
        std::vector<double> w;
        const auto n = static_cast<std::size_t>(spec_.n_rows);
        switch (spec_.weights) {
            case WeightKind::uniform:
                w.assign(n, 1.0 / static_cast<double>(n));
                break;
            case WeightKind::zipf: {
                w.resize(n);
                double norm = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    w[k] = std::pow(static_cast<double>(k + 1), -spec_.zipf_s);
                    norm += w[k];
                }
                for (auto& x : w) x /= norm;
                break;
            }
            case WeightKind::explicit_list: {
                w = spec_.explicit_weights;
                if (w.size() != n)
                    throw pattern_error("explicit weights must list one weight per row");
                double sum = 0.0;
                for (double x : w) {
                    if (x < 0.0) throw pattern_error("negative weight");
                    sum += x;
                }
                if (std::abs(sum - 1.0) > 1e-9)
                    throw pattern_error("weights must sum to 1");
                break;
            }
        }
        cumulative_.resize(w.size());
        double acc = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            acc += w[k];
            cumulative_[k] = acc;
        }
        cumulative_.back() = 1.0;
    }
    buffer_.reserve(static_cast<std::size_t>(slots_));
}

const std::vector<row_t>& PatternStream::next_interval() {
    buffer_.clear();
    switch (spec_.kind) {
        case PatternKind::trrespass:
            fill_round_robin();
            break;
        case PatternKind::random:
            fill_round_robin();
            for (std::size_t i = buffer_.size(); i > 1; --i)
                std::swap(buffer_[i - 1], buffer_[rng_.next_below(i)]);
            break;
        case PatternKind::decoy_flood:
            fill_decoy_flood();
            break;
        case PatternKind::graphene_adversarial:
            fill_graphene_adversarial();
            break;
        case PatternKind::weighted:
            fill_weighted();
            break;
        case PatternKind::trace:
            fill_trace_interval();
            break;
    }
    ++interval_;
    return buffer_;
}

void PatternStream::fill_round_robin() {
    const auto n = aggressors_.size();
    for (std::int64_t k = 0; k < slots_; ++k)
        buffer_.push_back(aggressors_[(rr_phase_ + k) % n]);
    rr_phase_ = (rr_phase_ + static_cast<std::uint64_t>(slots_)) % n;
}

void PatternStream::fill_decoy_flood() {
    // Even slots carry one-shot decoys from a rotating pool, odd slots the
    // persistent aggressors; each interval both starts and ends on a decoy,
    // and no pool member ever matches the aggressor rate.
    const auto n = aggressors_.size();
    const row_t decoy_base =
        aggressors_.back() + static_cast<row_t>(2 * 2 + 2);
    for (std::int64_t k = 0; k < slots_; ++k) {
        if (k % 2 == 0 && spec_.decoy_count > 0) {
            buffer_.push_back(decoy_base +
                              decoy_next_++ % static_cast<row_t>(spec_.decoy_count));
        } else {
            buffer_.push_back(aggressors_[rr_phase_++ % n]);
        }
    }
}

void PatternStream::fill_graphene_adversarial() {
    // Full burst per aggressor, one interval long, cycling rows across
    // intervals. This is the churn-maximizing sequential order.
    const auto n = aggressors_.size();
    const row_t row = aggressors_[static_cast<std::size_t>(interval_) % n];
    buffer_.assign(static_cast<std::size_t>(slots_), row);
}

void PatternStream::fill_weighted() {
    for (std::int64_t k = 0; k < slots_; ++k) {
        const double u = rng_.next_double();
        const auto it =
            std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
        buffer_.push_back(aggressors_[std::min(idx, aggressors_.size() - 1)]);
    }
}

void PatternStream::fill_trace_interval() {
    tras_buffer_.clear();
    const picos_t t0 = interval_ * cfg_.trefi_effective();
    const picos_t t1 = t0 + cfg_.trefi_effective();
    while (trace_pos_ < trace_.size() && trace_[trace_pos_].time < t1) {
        const auto& ev = trace_[trace_pos_];
        if (ev.time < t0 + cfg_.trfc)
            throw pattern_error("trace activation overlaps refresh at " +
                                format_ns(ev.time) + "ns");
        buffer_.push_back(ev.row);
        tras_buffer_.push_back(ev.tras);
        ++trace_pos_;
    }
    if (static_cast<std::int64_t>(buffer_.size()) > slots_)
        throw pattern_error("trace exceeds activation slots in one tREFIe");
}

std::vector<ActivationEvent> parse_trace(std::istream& in,
                                         const std::string& origin) {
    std::vector<ActivationEvent> events;
    std::string line;
    std::size_t lineno = 0;
    picos_t last_time = -1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("time_ns", 0) == 0) continue;  // header
        std::istringstream ls(line);
        std::string t_field, row_field, tras_field;
        if (!std::getline(ls, t_field, ',') ||
            !std::getline(ls, row_field, ',') ||
            !std::getline(ls, tras_field))
            throw pattern_error(origin + ":" + std::to_string(lineno) +
                                ": expected time_ns,row,tras_ns");
        ActivationEvent ev;
        try {
            ev.time = parse_ns(t_field);
            ev.row = static_cast<row_t>(std::stoul(row_field));
            ev.tras = parse_ns(tras_field);
        } catch (const std::exception& e) {
            throw pattern_error(origin + ":" + std::to_string(lineno) + ": " +
                                e.what());
        }
        if (ev.time < last_time)
            throw pattern_error(origin + ":" + std::to_string(lineno) +
                                ": time regression");
        last_time = ev.time;
        events.push_back(ev);
    }
    return events;
}

std::vector<ActivationEvent> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pattern_error("cannot open trace '" + path + "'");
    return parse_trace(in, path);
}

void dump_trace(std::ostream& out, const std::vector<ActivationEvent>& events) {
    out << "time_ns,row,tras_ns\n";
    for (const auto& ev : events)
        out << format_ns(ev.time) << ',' << ev.row << ',' << format_ns(ev.tras)
            << '\n';
}

std::vector<ActivationEvent> materialize(const PatternSpec& spec,
                                         const TimingConfig& cfg,
                                         std::uint64_t seed,
                                         std::int64_t windows) {
    PatternStream stream(spec, cfg, seed);
    std::vector<ActivationEvent> events;
    const std::int64_t intervals = windows * cfg.refresh_cmds_per_window;
    for (std::int64_t i = 0; i < intervals; ++i) {
        const picos_t t0 = i * cfg.trefi_effective() + cfg.trfc;
        const auto& rows = stream.next_interval();
        for (std::size_t k = 0; k < rows.size(); ++k) {
            events.push_back({t0 + static_cast<picos_t>(k) * cfg.trc_min,
                              rows[k], stream.tras_at(k)});
        }
    }
    return events;
}

}  // namespace rhsim
