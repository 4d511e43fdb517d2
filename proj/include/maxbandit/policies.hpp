#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "maxbandit/instance.hpp"
#include "maxbandit/rng.hpp"
#include "maxbandit/tail_bound.hpp"

namespace maxbandit {

/// Accuracy epsilon (reward units) and confidence delta of an (epsilon, delta) query.
struct PolicyConfig {
    double epsilon = 0.0;
    double delta = 0.0;

    /// Throws DomainError unless epsilon in (0, eps0] and delta in (0, 1).
    void validate(const TailBound& tb) const;
};

/// Max-CB's log term L, plus the flag for L < 10 (outside the proven regime).
struct LogTerm {
    double value = 0.0;
    bool below_10 = false;
};

inline constexpr double kMinValidL = 10.0;

/// L = 6 ln(|K| (1 + (-ln delta) / G_*(epsilon))).
LogTerm compute_L(std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb);

/// Initial per-arm sample count: floor((L - ln delta) / G_*(eps0)) + 1.
std::uint64_t compute_N0(double L, const PolicyConfig& cfg, const TailBound& tb);

/// U(count) = G_*^{-1}((L - ln delta) / count), clamped to eps0 when the
/// argument leaves the domain.
double index_width(std::uint64_t count, double L, const PolicyConfig& cfg, const TailBound& tb);

/// floor((L - ln delta) / G_*(epsilon)) + 1: no arm is ever sampled more often.
std::uint64_t max_cb_per_arm_limit(double L, const PolicyConfig& cfg, const TailBound& tb);

/// |K| * per-arm limit + 1. Unreachable by a correct Max-CB run.
std::uint64_t default_safety_cap(std::size_t num_arms, double L, const PolicyConfig& cfg, const TailBound& tb);

/// Number of draws the unified-arm algorithm takes: ceil((-ln delta) |K| / G_*(epsilon)) + 1.
std::uint64_t unified_sample_count(std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb);

enum class Termination { stopped_by_rule, hit_safety_cap };

struct RunTrace {
    double returned_value = -std::numeric_limits<double>::infinity();
    std::uint64_t total_samples = 0;
    std::vector<std::uint64_t> per_arm_counts;
    Termination termination = Termination::stopped_by_rule;
    bool l_below_10 = false;
};

/// Sampling oracle: the policies see arms only through this.
class ArmSampler {
public:
    virtual ~ArmSampler() = default;
    virtual std::size_t num_arms() const = 0;
    virtual double sample(std::size_t arm) = 0;
};

struct UnifiedDraw {
    std::size_t arm;
    double reward;
};

/// Unified-arm oracle: every draw picks an arm uniformly at random first.
class UnifiedSampler {
public:
    virtual ~UnifiedSampler() = default;
    virtual UnifiedDraw sample_unified() = 0;
};

/// Oracle backed by a BanditInstance, with one random stream per arm and one for
/// the unified arm choice, all keyed on (master_seed, trial).
class InstanceSampler final : public ArmSampler, public UnifiedSampler {
public:
    InstanceSampler(const BanditInstance& inst, std::uint64_t master_seed, std::uint64_t trial);

    std::size_t num_arms() const override { return inst_->num_arms(); }
    double sample(std::size_t arm) override;
    UnifiedDraw sample_unified() override;

private:
    RandomStream& stream(std::size_t arm);

    const BanditInstance* inst_;
    std::uint64_t master_seed_;
    std::uint64_t trial_;
    std::vector<std::optional<RandomStream>> arm_streams_;
    RandomStream choice_stream_;
};

struct MaxCbOptions {
    /// 0 selects default_safety_cap().
    std::uint64_t safety_cap = 0;
    /// Optional hard per-arm sample caps (empty = none). An arm at its cap is
    /// no longer eligible for the argmax. Only used to build deliberately
    /// under-sampling variants.
    std::vector<std::uint64_t> per_arm_cap;
};

/// Maximal Confidence Bound algorithm. Ties in the argmax go to the lowest index.
RunTrace run_max_cb(ArmSampler& sampler, const PolicyConfig& cfg, const TailBound& tb, const MaxCbOptions& options = {});

/// Unified-arm algorithm: a fixed number of draws from the unified arm, return the best.
RunTrace run_unified(UnifiedSampler& sampler, std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb);

}  // namespace maxbandit
