#pragma once

#include <cstdint>

namespace spid {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen over std::mt19937_64 so that
// seeded data sets are reproducible bit-for-bit across implementations and
// standard libraries; the whole algorithm is these two functions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1).
    double next_sym() { return 2.0 * next_unit() - 1.0; }

private:
    std::uint64_t state_;
};

} // namespace spid
