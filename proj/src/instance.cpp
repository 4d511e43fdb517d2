#include "maxbandit/instance.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "maxbandit/errors.hpp"

namespace maxbandit {

BanditInstance::BanditInstance(std::vector<ArmPtr> arms, TailBound tail_bound, int certify_grid)
    : arms_(std::move(arms)), tail_bound_(std::move(tail_bound)) {
    if (arms_.empty()) throw InputError("bandit instance needs at least one arm");
    for (const auto& a : arms_)
        if (!a) throw InputError("bandit instance arm is null");
    mu_star_ = arms_.front()->mu_star();
    for (std::size_t k = 1; k < arms_.size(); ++k) {
        if (arms_[k]->mu_star() > mu_star_) {
            mu_star_ = arms_[k]->mu_star();
            best_arm_ = k;
        }
    }
    assumption_ = verify_assumption(arms_, tail_bound_, certify_grid);
}

AssumptionReport verify_assumption(const BanditInstance& inst, int grid_points) {
    return verify_assumption(inst.arms(), inst.tail_bound(), grid_points);
}

AssumptionReport verify_assumption(const std::vector<ArmPtr>& arms, const TailBound& tb, int grid_points) {
    if (grid_points < 2) throw DomainError("verify_assumption needs at least 2 grid points");
    const double eps0 = tb.eps0();
    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    std::vector<double> bound(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = (i + 1 == grid.size()) ? eps0 : eps0 * static_cast<double>(i) / (grid_points - 1);
        bound[i] = tb.evaluate(grid[i]);
    }

    AssumptionReport report;
    report.worst_violation = -std::numeric_limits<double>::infinity();
    report.min_ratio = std::numeric_limits<double>::infinity();

    // Large instances typically share one ArmPtr across many identical arms.
    std::unordered_map<const ArmModel*, std::pair<double, double>> seen;  // worst violation + its eps
    for (std::size_t k = 0; k < arms.size(); ++k) {
        const ArmModel* arm = arms[k].get();
        if (seen.count(arm)) continue;
        double arm_worst = -std::numeric_limits<double>::infinity();
        double arm_worst_eps = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double tail = arm->tail(grid[i]);
            const double violation = bound[i] - tail;
            if (violation > arm_worst) {
                arm_worst = violation;
                arm_worst_eps = grid[i];
            }
            if (bound[i] > 0.0) report.min_ratio = std::min(report.min_ratio, tail / bound[i]);
        }
        seen.emplace(arm, std::make_pair(arm_worst, arm_worst_eps));
        if (arm_worst > report.worst_violation) {
            report.worst_violation = arm_worst;
            report.worst_arm = k;
            report.worst_eps = arm_worst_eps;
        }
    }
    report.certified = report.worst_violation <= kAssumptionTolerance;
    return report;
}

}  // namespace maxbandit
