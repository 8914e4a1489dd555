#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <vector>

namespace rhsim {

using row_t = std::uint32_t;
inline constexpr row_t kNoRow = std::numeric_limits<row_t>::max();

struct CountEntry {
    row_t row = kNoRow;
    double count = 0.0;

    bool empty() const { return row == kNoRow; }
};

// Fixed-capacity table of (row, count) pairs shared by the counter-based
// trackers. Ties resolve the way the hardware comparator tree does: the
// minimum search prefers the lowest slot, the maximum search the highest.
//
// A row -> slot index keeps lookups O(1); min is cached and only rescanned
// after a mutation that can change it.
class CountTable {
public:
    CountTable(std::size_t capacity, std::int64_t rows_per_bank)
        : entries_(capacity), slot_of_row_(static_cast<std::size_t>(rows_per_bank), -1) {}

    std::size_t capacity() const { return entries_.size(); }
    std::size_t size() const { return live_; }
    bool full() const { return live_ == entries_.size(); }
    double sum() const { return sum_; }

    const CountEntry& entry(std::size_t pos) const { return entries_[pos]; }
    const std::vector<CountEntry>& entries() const { return entries_; }

    // Slot holding `row`, or -1.
    int find(row_t row) const { return slot_of_row_[row]; }

    void add(std::size_t pos, double delta) {
        assert(!entries_[pos].empty());
        entries_[pos].count += delta;
        sum_ += delta;
        if (static_cast<int>(pos) == min_pos_) min_dirty_ = true;
    }

    // Fills the lowest empty slot.
    std::size_t insert(row_t row, double count) {
        assert(!full());
        std::size_t pos = 0;
        while (!entries_[pos].empty()) ++pos;
        entries_[pos] = {row, count};
        slot_of_row_[row] = static_cast<int>(pos);
        ++live_;
        sum_ += count;
        min_dirty_ = true;
        return pos;
    }

    // Hands slot `pos` to `row`; the previous count is adjusted by `delta`
    // (approximate counting keeps it, exact-replacement callers overwrite).
    void take_over(std::size_t pos, row_t row, double delta) {
        CountEntry& e = entries_[pos];
        assert(!e.empty());
        slot_of_row_[e.row] = -1;
        slot_of_row_[row] = static_cast<int>(pos);
        e.row = row;
        e.count += delta;
        sum_ += delta;
        min_dirty_ = true;
    }

    void set_count(std::size_t pos, double count) {
        CountEntry& e = entries_[pos];
        assert(!e.empty());
        sum_ += count - e.count;
        e.count = count;
        min_dirty_ = true;
    }

    void erase(std::size_t pos) {
        CountEntry& e = entries_[pos];
        assert(!e.empty());
        slot_of_row_[e.row] = -1;
        sum_ -= e.count;
        e = {};
        --live_;
        min_dirty_ = true;
    }

    void clear() {
        for (auto& e : entries_) {
            if (!e.empty()) slot_of_row_[e.row] = -1;
            e = {};
        }
        live_ = 0;
        sum_ = 0.0;
        min_dirty_ = true;
    }

    // Position and count of the minimum entry; lowest slot wins ties.
    std::pair<std::size_t, double> min_entry() const {
        assert(live_ > 0);
        if (min_dirty_) rescan_min();
        return {static_cast<std::size_t>(min_pos_), entries_[min_pos_].count};
    }

    // Position and count of the maximum entry; highest slot wins ties
    // (temporal locality: later slots were filled more recently).
    std::pair<std::size_t, double> max_entry() const {
        assert(live_ > 0);
        int best = -1;
        double best_count = 0.0;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].empty()) continue;
            if (best < 0 || entries_[i].count >= best_count) {
                best = static_cast<int>(i);
                best_count = entries_[i].count;
            }
        }
        return {static_cast<std::size_t>(best), best_count};
    }

private:
    void rescan_min() const {
        int best = -1;
        double best_count = 0.0;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].empty()) continue;
            if (best < 0 || entries_[i].count < best_count) {
                best = static_cast<int>(i);
                best_count = entries_[i].count;
            }
        }
        min_pos_ = best;
        min_dirty_ = false;
    }

    std::vector<CountEntry> entries_;
    std::vector<int> slot_of_row_;
    std::size_t live_ = 0;
    double sum_ = 0.0;
    mutable int min_pos_ = -1;
    mutable bool min_dirty_ = true;
};

}  // namespace rhsim
