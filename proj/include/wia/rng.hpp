#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace wia {

// Counter-based deterministic RNG. A stream is identified purely by its
// key tuple, so draws are reproducible regardless of which order streams
// are consumed in (e.g. per-subband noise, per-sample augmentation).
//
// The generator is a SplitMix64 sequence whose initial state is a mix of
// the key words. SplitMix64 passes BigCrush and is the standard choice
// for seeding / keyed streams.
class CounterRng {
public:
    explicit CounterRng(std::initializer_list<std::uint64_t> keys) {
        state_ = 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t k : keys) {
            state_ = mix(state_ ^ mix(k));
        }
        have_spare_ = false;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in the open interval (0, 1); never returns 0 or 1, which keeps
    // log() in Box-Muller finite.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double next_gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Modulo bias is negligible for the small n used here (crop offsets,
        // permutation indices), but use rejection anyway.
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_;
};

}  // namespace wia
