#pragma once

#include <cstdint>

namespace rhsim {

enum class RngMode { exact_uniform, lfsr20 };

// splitmix64 finalizer; also the documented per-window seed mixing hash.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic pseudo-random source shared by every probabilistic tracker.
//
// exact_uniform runs a splitmix64 stream and converts 53 bits to a double,
// which keeps draws bit-identical across platforms. lfsr20 models the
// hardware generator: a 20-bit Fibonacci LFSR with the primitive polynomial
// x^20 + x^3 + 1, full period 2^20 - 1, draw value = state / 2^20.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed = 0,
                          RngMode mode = RngMode::exact_uniform) {
        reseed(seed, mode);
    }

    void reseed(std::uint64_t seed, RngMode mode) {
        seed_ = seed;
        mode_ = mode;
        set_state(mix64(seed));
    }

    void reseed(std::uint64_t seed) { reseed(seed, mode_); }

    // New stream for window w; a pure function of (seed, w).
    void reseed_per_window(std::uint64_t window_index) {
        set_state(mix64(seed_ ^ mix64(window_index + 1)));
    }

    RngMode mode() const { return mode_; }
    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Advances the 20-bit LFSR one step and returns the new state.
    std::uint32_t next_lfsr20() {
        const std::uint32_t bit = ((lfsr_ >> 19) ^ (lfsr_ >> 2)) & 1u;
        lfsr_ = ((lfsr_ << 1) | bit) & 0xfffffu;
        return lfsr_;
    }

    // Next value in [0, 1).
    double next_double() {
        if (mode_ == RngMode::lfsr20)
            return next_lfsr20() * (1.0 / 1048576.0);
        return (next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    // Uniform integer in [0, n), n >= 1. Used for shuffles and evictions.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

private:
    void set_state(std::uint64_t mixed) {
        state_ = mixed;
        lfsr_ = static_cast<std::uint32_t>(mixed & 0xfffffu);
        if (lfsr_ == 0) lfsr_ = 1;  // all-zero is the LFSR's absorbing state
    }

    std::uint64_t seed_ = 0;
    std::uint64_t state_ = 0;
    std::uint32_t lfsr_ = 1;
    RngMode mode_ = RngMode::exact_uniform;
};

}  // namespace rhsim
