#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxbandit/instance.hpp"
#include "maxbandit/policies.hpp"

namespace maxbandit {

// Analyst-side evaluators of the sample-complexity bounds. Unlike the
// policies these read the true maxima mu*_k of the instance.

/// Largest delta for which the lower bounds hold: (3/20) e^{-3}.
double lower_bound_delta_max();

/// Precondition flags. A flag is true when its precondition holds or does not
/// apply to the bound in question; violated preconditions never abort.
struct BoundFlags {
    bool concavity_ok = true;
    bool delta_ok = true;
    bool epsilon_ok = true;
    bool L_ok = true;

    bool all_ok() const { return concavity_ok && delta_ok && epsilon_ok && L_ok; }
    /// Machine names of the violated preconditions, e.g. "concavity_unmet".
    std::vector<std::string> violations() const;
};

struct BoundReport {
    double value = 0.0;
    std::vector<double> per_arm_terms;
    double constant_term = 0.0;
    BoundFlags flags;
    /// Arm left out of the sum (lower bound over K \ {k*}).
    std::optional<std::size_t> excluded_arm;
    /// Exact deterministic draw count, where the algorithm has one.
    std::optional<std::uint64_t> exact_count;
};

/// min{max(eps, gap), eps0}.
double theta_k(double eps, double eps0, double gap);

/// E[T] >= sum_{k != k*} ln(3 / (20 delta)) / (32 G_*(Theta_k)) for (eps, delta)-correct algorithms.
BoundReport lower_bound_multi(const BanditInstance& inst, const PolicyConfig& cfg);
/// Max-CB: E[T] <= sum_k (L - ln delta) / G_*(Theta_k) + |K|.
BoundReport upper_bound_max_cb(const BanditInstance& inst, const PolicyConfig& cfg);
/// Unified-arm lower bound |K| ln(3 / (20 delta)) / (16 G_*(eps)).
BoundReport lower_bound_unified(std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb);
/// Unified-arm algorithm: E[T] <= |K| ln(1/delta) / G_*(eps) + 2, with the exact count attached.
BoundReport upper_bound_unified(std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb);

struct EpsPrime {
    double value = 0.0;
    /// The inverse's argument exceeded G_*(eps0); value is saturated at eps0.
    bool beyond_domain = false;
};

/// eps' = G_*^{-1}((|K| (L - ln delta))^{1 - alpha} G_*(eps)^alpha), saturating at eps0.
EpsPrime optimistic_eps_prime(std::size_t num_arms, double L_minus_ln_delta, double epsilon, double alpha,
                              const TailBound& tb);

struct RobustnessReport {
    double alpha = 1.0;
    double eps_prime = 0.0;
    bool beyond_domain = false;
    double delta_prime = 0.0;
    std::optional<double> complexity_bound;
    BoundFlags flags;
};

/// Max-CB when only alpha * G_* (alpha in (0, 1]) bounds the true tails.
RobustnessReport robustness_optimistic(const BanditInstance& inst, const PolicyConfig& cfg, double alpha);
/// Max-CB when alpha * G_* (alpha >= 1) also bounds the tails: delta' = delta^alpha e^{-(alpha - 1) L}.
RobustnessReport robustness_conservative(const PolicyConfig& cfg, double L, double alpha);
/// Same, with the sample-complexity bound of upper_bound_max_cb attached.
RobustnessReport robustness_conservative(const BanditInstance& inst, const PolicyConfig& cfg, double alpha);

}  // namespace maxbandit
