#pragma once

#include <cstdint>

namespace heb {

// splitmix64: tiny, fast, and stable across platforms. Used everywhere a
// deterministic stream is required so outputs do not depend on libstdc++
// distribution internals.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound) via rejection.
    uint64_t next_below(uint64_t bound) {
        if (bound == 0) return 0;
        uint64_t threshold = (~bound + 1) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1).
    double next_unit() { return (next() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi].
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    bool next_bool() { return (next() & 1) != 0; }

private:
    uint64_t state_;
};

// Order-independent per-item seeding: hash(seed, a, b) feeds a fresh stream
// so parallel workers produce identical bytes regardless of scheduling.
inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
    SplitMix64 g(seed ^ (a * 0xd6e8feb86659fd93ULL) ^ (b * 0xa5a5a5a5a5a5a5a5ULL));
    g.next();
    return g.next();
}

}  // namespace heb
