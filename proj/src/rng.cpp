#include "maxbandit/rng.hpp"

#include <initializer_list>
#include <vector>

namespace maxbandit {

namespace {

std::mt19937_64 seeded_engine(std::initializer_list<std::uint64_t> key) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * key.size());
    for (std::uint64_t k : key) {
        words.push_back(static_cast<std::uint32_t>(k));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(seeded_engine({seed})) {}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t stream)
    : engine_(seeded_engine({master_seed, trial, stream})) {}

double RandomStream::uniform() {
    // 53 random mantissa bits, shifted by half a step so 0 is never returned.
    constexpr double kStep = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * kStep;
}

}  // namespace maxbandit
