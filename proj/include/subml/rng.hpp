#pragma once

#include <array>
#include <cstdint>

namespace subml {

// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3"). Stateless block function: same (counter, key) -> same output.
using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key);

// What a substream is used for; part of the counter so that draws for
// different purposes in the same trial never overlap.
enum class StreamRole : std::uint32_t {
    Symbols = 1,
    Noise = 2,
    Channel = 3,
    Detector = 4,
};

/// Sequential view over the Philox blocks of one (seed, trial, role) triple.
///
/// Counter layout: word 0 = block index, word 1 = role, words 2..3 = trial.
/// The key is the 64-bit master seed.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t trial, StreamRole role);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    // Uniform on (0, 1), 53 random bits.
    double uniform();
    // Standard normal (Box-Muller, second value cached).
    double normal();
    // Uniform integer in [0, n), unbiased. n >= 1.
    std::uint64_t uniform_index(std::uint64_t n);

private:
    void refill();

    Philox4x32Key key_;
    Philox4x32Counter ctr_;
    Philox4x32Counter buf_{};
    unsigned used_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct SeedPolicy {
    std::uint64_t master_seed = 0;

    RandomStream stream(std::uint64_t trial, StreamRole role) const {
        return RandomStream(master_seed, trial, role);
    }
};

} // namespace subml
