#pragma once

#include <cstdint>

namespace pvl {

// 64-bit mixing generator (splitmix64). The full generator state is one
// word; output i is finalize(seed + (i+1)*GAMMA). Identical sequences on
// every platform, which the experiment harness relies on.
class Mix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit Mix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        state_ += kGamma;
        return finalize(state_);
    }

    // Unbiased draw from [0, n) by rejection; n >= 1.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

private:
    std::uint64_t state_;
};

// Seed-derivation rule for parallel streams: stream i of a master seed is
// an independent generator seeded with mix(master, i). Trials, and the
// (a-sample, b-sample) pair inside one trial, each get their own stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return Mix64::finalize(master ^ ((stream + 1) * Mix64::kGamma));
}

}  // namespace pvl
