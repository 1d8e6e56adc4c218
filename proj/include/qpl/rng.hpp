#pragma once

#include <cstdint>
#include <random>

namespace qpl {

/// Reproducible generator for one trajectory.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
/// It is seeded through std::seed_seq (also fully specified) with the four 32-bit
/// words (seed_lo, seed_hi, stream_lo, stream_hi), so (seed, stream) names an
/// independent, portable stream. Uniform doubles use the top 53 bits of each draw.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0,1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace qpl
