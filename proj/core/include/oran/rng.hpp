#pragma once

#include <cstdint>
#include <random>

namespace oran {

using Rng = std::mt19937_64;

// Independent named streams derived from one experiment seed. Every consumer
// (environment, exploration, learner sampling, weight init) gets its own stream
// so that consuming more draws in one never perturbs another.
enum class Stream : std::uint32_t {
    environment = 1,
    exploration = 2,
    learner = 3,
    init = 4,
    evaluation = 5,
};

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(index & 0xffffffffu),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

}  // namespace oran
