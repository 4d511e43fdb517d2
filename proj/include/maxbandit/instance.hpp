#pragma once

#include <cstddef>
#include <vector>

#include "maxbandit/arm_model.hpp"
#include "maxbandit/tail_bound.hpp"

namespace maxbandit {

/// Outcome of checking G_k(eps) >= G_*(eps) on a uniform grid over [0, eps0].
struct AssumptionReport {
    bool certified = true;
    /// max over arms and grid of G_*(eps) - G_k(eps); <= 0 when every arm dominates.
    double worst_violation = 0.0;
    std::size_t worst_arm = 0;
    double worst_eps = 0.0;
    /// min over arms and grid points eps > 0 of G_k(eps) / G_*(eps): the largest
    /// alpha for which alpha * G_* is still a valid bound on the grid.
    double min_ratio = 0.0;
};

inline constexpr double kAssumptionTolerance = 1e-12;
inline constexpr int kDefaultCertifyGrid = 1001;

/// The arm set K together with the tail bound the algorithms are given.
/// Uncertified instances are allowed; they model a mis-specified G_*.
class BanditInstance {
public:
    BanditInstance(std::vector<ArmPtr> arms, TailBound tail_bound, int certify_grid = kDefaultCertifyGrid);

    const std::vector<ArmPtr>& arms() const { return arms_; }
    const ArmModel& arm(std::size_t k) const { return *arms_.at(k); }
    std::size_t num_arms() const { return arms_.size(); }
    const TailBound& tail_bound() const { return tail_bound_; }

    /// max_k mu*_k.
    double mu_star() const { return mu_star_; }
    /// Lowest index among arms attaining mu_star().
    std::size_t best_arm() const { return best_arm_; }

    bool certified() const { return assumption_.certified; }
    const AssumptionReport& assumption() const { return assumption_; }

private:
    std::vector<ArmPtr> arms_;
    TailBound tail_bound_;
    double mu_star_ = 0.0;
    std::size_t best_arm_ = 0;
    AssumptionReport assumption_;
};

AssumptionReport verify_assumption(const BanditInstance& inst, int grid_points);
AssumptionReport verify_assumption(const std::vector<ArmPtr>& arms, const TailBound& tb, int grid_points);

}  // namespace maxbandit
