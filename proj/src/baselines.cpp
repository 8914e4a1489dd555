#include "rhsim/baselines.hpp"

#include <algorithm>

namespace rhsim {

std::optional<TrrAction> Graphene::on_activation(row_t row, picos_t, picos_t) {
    const int slot = table_.find(row);
    if (slot >= 0) {
        const auto pos = static_cast<std::size_t>(slot);
        table_.add(pos, 1.0);
        if (!queued_[pos] && table_.entry(pos).count >= threshold_) {
            queued_[pos] = true;
            pending_.push_back(row);
        }
        return std::nullopt;
    }
    // Miss: an empty slot is a zero-count entry, usable while spillover is 0.
    if (!table_.full()) {
        if (spillover_ == 0) {
            table_.insert(row, 1.0);
            return std::nullopt;
        }
        ++spillover_;
        return std::nullopt;
    }
    const auto [min_pos, min_count] = table_.min_entry();
    if (min_count == static_cast<double>(spillover_)) {
        table_.take_over(min_pos, row, 1.0);
        queued_[min_pos] = false;
        return std::nullopt;
    }
    if (min_count < static_cast<double>(spillover_)) {
        // Counts below the spillover exist only after an in-place TRR reset;
        // another entry may still match exactly.
        for (std::size_t i = 0; i < table_.capacity(); ++i) {
            if (!table_.entry(i).empty() &&
                table_.entry(i).count == static_cast<double>(spillover_)) {
                table_.take_over(i, row, 1.0);
                queued_[i] = false;
                return std::nullopt;
            }
        }
    }
    ++spillover_;
    return std::nullopt;
}

TrrAction Graphene::on_refresh(std::uint64_t cmd_index, picos_t) {
    TrrAction a;
    a.refresh_cmd_index = cmd_index;
    if (pending_.empty()) return a;
    const row_t target = pending_.front();
    pending_.pop_front();
    a.aggressor = target;
    a.victims = victims_of(target, blast_radius_, rows_per_bank_);
    const int slot = table_.find(target);
    if (slot >= 0) {
        const auto pos = static_cast<std::size_t>(slot);
        table_.set_count(pos, 0.0);
        queued_[pos] = false;
    }
    return a;
}

std::optional<TrrAction> Twice::on_activation(row_t row, picos_t, picos_t) {
    const int slot = table_.find(row);
    if (slot >= 0) {
        table_.add(static_cast<std::size_t>(slot), 1.0);
    } else if (!table_.full()) {
        const std::size_t pos = table_.insert(row, 1.0);
        life_[pos] = 0;
    } else {
        const auto [min_pos, min_count] = table_.min_entry();
        (void)min_count;
        table_.take_over(min_pos, row, 0.0);
        table_.set_count(min_pos, 1.0);  // no approximate counting here
        life_[min_pos] = 0;
    }
    return std::nullopt;
}

TrrAction Twice::on_refresh(std::uint64_t cmd_index, picos_t) {
    // Per-interval maintenance: collect rows over the threshold, age the
    // rest, and drop entries below the pace needed to ever reach the
    // threshold within a window.
    for (std::size_t i = 0; i < table_.capacity(); ++i) {
        if (table_.entry(i).empty()) continue;
        ++life_[i];
        const double count = table_.entry(i).count;
        if (count >= static_cast<double>(threshold_)) {
            pending_.push_back(table_.entry(i).row);
            table_.erase(i);
            continue;
        }
        const double pace = static_cast<double>(threshold_) *
                            static_cast<double>(life_[i]) /
                            static_cast<double>(window_cmds_);
        if (count < pace) table_.erase(i);
    }

    TrrAction a;
    a.refresh_cmd_index = cmd_index;
    if (pending_.empty()) return a;
    const row_t target = pending_.front();
    pending_.pop_front();
    a.aggressor = target;
    a.victims = victims_of(target, blast_radius_, rows_per_bank_);
    return a;
}

std::optional<TrrAction> Prohit::on_activation(row_t row, picos_t, picos_t) {
    // Hit in the hot table: climb one slot.
    for (std::size_t i = 0; i < hot_.size(); ++i) {
        if (hot_[i] != row) continue;
        if (i > 0 && rng_.next_double() < p_promote_) {
            std::swap(hot_[i], hot_[i - 1]);
        }
        return std::nullopt;
    }
    // Hit in the cold table: promote into the bottom hot slot.
    for (std::size_t i = 0; i < cold_.size(); ++i) {
        if (cold_[i] != row) continue;
        if (rng_.next_double() < p_promote_) {
            const row_t displaced = hot_.back();
            hot_.back() = row;
            cold_.erase(cold_.begin() + static_cast<std::ptrdiff_t>(i));
            if (displaced != kNoRow) cold_.push_back(displaced);
        }
        return std::nullopt;
    }
    // Miss: insert into the cold table, evicting a uniformly random entry.
    if (cold_.size() < cold_max_) {
        cold_.push_back(row);
    } else {
        cold_[rng_.next_below(cold_.size())] = row;
    }
    return std::nullopt;
}

TrrAction Prohit::on_refresh(std::uint64_t cmd_index, picos_t) {
    TrrAction a;
    a.refresh_cmd_index = cmd_index;
    for (auto& slot : hot_) {
        if (slot == kNoRow) continue;
        a.aggressor = slot;
        a.victims = victims_of(slot, blast_radius_, rows_per_bank_);
        slot = kNoRow;
        break;
    }
    return a;
}

std::optional<TrrAction> Mrloc::on_activation(row_t row, picos_t, picos_t) {
    TrrAction a;
    for (int d = blast_radius_; d >= -blast_radius_; --d) {
        if (d == 0) continue;
        const std::int64_t v = static_cast<std::int64_t>(row) - d;
        if (v < 0 || v >= rows_per_bank_) continue;
        const row_t victim = static_cast<row_t>(v);
        const auto it = last_enqueue_.find(victim);
        if (it != last_enqueue_.end()) {
            const std::uint64_t dist = seq_ - it->second;
            const double p = trr_probability(dist);
            if (p > 0.0 && rng_.next_double() < p) a.victims.push_back(victim);
        }
        last_enqueue_[victim] = seq_++;
    }
    if (a.victims.empty()) return std::nullopt;
    a.aggressor = row;
    return a;
}

}  // namespace rhsim
