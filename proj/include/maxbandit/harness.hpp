#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maxbandit/bounds.hpp"
#include "maxbandit/instance.hpp"
#include "maxbandit/policies.hpp"

namespace maxbandit {

enum class PolicyKind { max_cb, unified };

const char* to_string(PolicyKind p);
PolicyKind policy_from_string(const std::string& name);

struct ExperimentSpec {
    std::shared_ptr<const BanditInstance> instance;
    PolicyKind policy = PolicyKind::max_cb;
    PolicyConfig cfg;
    std::uint64_t num_trials = 1;
    std::uint64_t master_seed = 0;
    int grid_points = kDefaultCertifyGrid;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 1;
    MaxCbOptions max_cb_options;
};

struct TrialRecord {
    std::uint64_t trial = 0;
    double returned_value = 0.0;
    std::uint64_t total_samples = 0;
    bool failed = false;
    bool hit_safety_cap = false;
    std::vector<std::uint64_t> per_arm_counts;
};

struct CorrectnessEstimate {
    double rate = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
};

inline constexpr double kWilsonZ95 = 1.96;

/// rate = 1 - failures / trials with its Wilson score interval.
CorrectnessEstimate estimate_correctness(std::uint64_t failures, std::uint64_t trials, double z = kWilsonZ95);

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    std::vector<double> per_arm_mean;
};

/// Empirical sample counts next to the theoretical bounds for the matching policy.
struct BoundComparison {
    PolicyKind policy = PolicyKind::max_cb;
    std::optional<double> empirical_mean;
    BoundReport lower;
    BoundReport upper;
    std::optional<double> ratio_upper_to_empirical;
    /// Robustness quantities when the tail bound is optimistic (alpha < 1) or
    /// conservative (alpha > 1) on the instance's grid.
    std::optional<RobustnessReport> robustness;
};

struct ExperimentReport {
    PolicyKind policy = PolicyKind::max_cb;
    PolicyConfig cfg;
    std::uint64_t master_seed = 0;
    std::size_t num_arms = 0;
    /// The true mu* failures are judged against.
    double reference_max = 0.0;

    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::uint64_t safety_cap_hits = 0;
    CorrectnessEstimate correctness;
    SampleStats samples;
    double mean_returned = 0.0;
    double min_returned = 0.0;
    double max_returned = 0.0;

    AssumptionReport assumption;
    /// Max-CB's deterministic bound on total samples, |K| (floor((L - ln delta) / G_*(eps)) + 1).
    std::optional<std::uint64_t> deterministic_cap;
    BoundComparison bounds;

    /// Per-trial records in trial order; not part of the serialized report.
    std::vector<TrialRecord> records;
};

/// Runs num_trials independent executions on a worker pool. The report depends
/// only on the spec, never on worker count or scheduling.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Builds the aggregate statistics from trial records in any order.
ExperimentReport aggregate_trials(const ExperimentSpec& spec, std::vector<TrialRecord> records);

/// `report` may be null for bounds-only comparisons.
BoundComparison compare_bounds(const ExperimentReport* report, const BanditInstance& inst, const PolicyConfig& cfg,
                               PolicyKind policy);

}  // namespace maxbandit
