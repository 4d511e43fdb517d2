#pragma once

#include <cstdint>
#include <random>

namespace maxbandit {

/// Deterministic uniform stream. Each (master seed, trial, stream id) triple
/// keys an independent engine, so a trial's draws do not depend on which
/// worker runs it or on how many other streams exist.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);
    RandomStream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t stream);

    /// One variate in the open interval (0, 1); consumes exactly one engine output.
    double uniform();

private:
    std::mt19937_64 engine_;
};

/// Stream id reserved for the unified-arm choice.
inline constexpr std::uint64_t kArmChoiceStream = ~std::uint64_t{0};

}  // namespace maxbandit
