#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxbandit/adversarial.hpp"
#include "maxbandit/bounds.hpp"
#include "maxbandit/harness.hpp"
#include "maxbandit/instance.hpp"

namespace maxbandit::io {

using nlohmann::json;

// Instance documents. Schema (see README):
//   { "tail_bound": {...}, "arms": [...], "config": {...}?, "experiment": {...}? }
// Every parse failure throws InputError.

json tail_bound_to_json(const TailBound& tb);
TailBound tail_bound_from_json(const json& j);

json arm_to_json(const ArmModel& arm);
ArmPtr arm_from_json(const json& j);

/// Consecutive entries holding the same ArmPtr collapse into one entry with "count".
json arms_to_json(const std::vector<ArmPtr>& arms);
std::vector<ArmPtr> arms_from_json(const json& j);

struct ExperimentDefaults {
    std::optional<std::string> policy;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<int> grid_points;
};

struct InstanceDocument {
    std::vector<ArmPtr> arms;
    std::shared_ptr<const TailBound> tail_bound;
    std::optional<double> epsilon;
    std::optional<double> delta;
    ExperimentDefaults experiment;

    std::shared_ptr<const BanditInstance> build(int certify_grid = kDefaultCertifyGrid) const;
};

InstanceDocument parse_instance_document(const json& j);
/// Reads and parses a file; unreadable files and JSON syntax errors are InputErrors too.
InstanceDocument load_instance_document(const std::string& path);

json instance_to_json(const BanditInstance& inst, const std::optional<PolicyConfig>& cfg = std::nullopt);

// Reports.

json bound_report_to_json(const BoundReport& r);
json robustness_to_json(const RobustnessReport& r);
json assumption_to_json(const AssumptionReport& a);
json hypothesis_to_json(const HypothesisInstance& h, const AssumptionReport& verified);
/// Everything in the report except the per-trial records.
json report_to_json(const ExperimentReport& rep);

/// Header `trial,V,T,failed,count_0..count_{K-1}`, one row per record, full precision.
void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records, std::size_t num_arms);

/// Shortest decimal text that reads back to the same double.
std::string format_full(double x);
/// Three significant figures, truncated; compact scientific ("3.52e8") outside [1e-3, 1e4).
std::string format_sig3(double x);

}  // namespace maxbandit::io
