#pragma once

#include <cstdint>
#include <vector>

namespace kknn {

/// Minimal splitmix64 stream. Used instead of <random> engines wherever
/// reproducibility across platforms matters: the standard distributions are
/// implementation-defined, this is not.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, bound) via Lemire's multiply-shift rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        while (true) {
            std::uint64_t x = next();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            auto lo = static_cast<std::uint64_t>(m);
            if (lo >= bound || lo >= (0 - bound) % bound) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (one value per call, no cached spare).
    double gaussian();

  private:
    std::uint64_t state_;
};

/// Deterministic Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(values[i - 1], values[j]);
    }
}

/// Derives an independent stream seed from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

}  // namespace kknn
