#pragma once

#include <cstdint>
#include <random>

namespace ecorate {

/// Seedable, portable uniform generator.
///
/// Engine: std::mt19937_64 seeded with a single 64-bit value. Unit draws map
/// the top 53 bits of each output word to [0,1):
///
///     u = (next() >> 11) * 2^-53
///
/// Both the engine and this mapping are fully specified, so any
/// implementation can replay a draw sequence bit-exactly from the seed.
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ecorate
