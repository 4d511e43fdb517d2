#include "maxbandit/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "maxbandit/errors.hpp"

namespace maxbandit {

namespace {

double sum(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
}

double tail_at(const TailBound& tb, double x, const char* what) {
    const double g = tb.evaluate(x);
    if (!(g > 0.0)) throw DomainError(std::string("G_* vanishes at ") + what);
    return g;
}

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

void check_epsilon(double eps) {
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
}

}  // namespace

double lower_bound_delta_max() { return 3.0 / 20.0 * std::exp(-3.0); }

std::vector<std::string> BoundFlags::violations() const {
    std::vector<std::string> out;
    if (!concavity_ok) out.emplace_back("concavity_unmet");
    if (!delta_ok) out.emplace_back("delta_too_large");
    if (!epsilon_ok) out.emplace_back("epsilon_beyond_eps0");
    if (!L_ok) out.emplace_back("L_below_10");
    return out;
}

double theta_k(double eps, double eps0, double gap) { return std::min(std::max(eps, gap), eps0); }

BoundReport lower_bound_multi(const BanditInstance& inst, const PolicyConfig& cfg) {
    check_epsilon(cfg.epsilon);
    check_delta(cfg.delta);
    const TailBound& tb = inst.tail_bound();
    BoundReport r;
    r.flags.concavity_ok = tb.is_concave();
    r.flags.delta_ok = cfg.delta <= lower_bound_delta_max();
    r.flags.epsilon_ok = cfg.epsilon <= tb.eps0();
    r.excluded_arm = inst.best_arm();

    const double log_term = std::log(3.0 / (20.0 * cfg.delta));
    r.per_arm_terms.assign(inst.num_arms(), 0.0);
    for (std::size_t k = 0; k < inst.num_arms(); ++k) {
        if (k == inst.best_arm()) continue;
        const double theta = theta_k(cfg.epsilon, tb.eps0(), inst.mu_star() - inst.arm(k).mu_star());
        r.per_arm_terms[k] = log_term / (32.0 * tail_at(tb, theta, "Theta_k"));
    }
    r.value = sum(r.per_arm_terms);
    return r;
}

BoundReport upper_bound_max_cb(const BanditInstance& inst, const PolicyConfig& cfg) {
    check_epsilon(cfg.epsilon);
    check_delta(cfg.delta);
    const TailBound& tb = inst.tail_bound();
    const LogTerm L = compute_L(inst.num_arms(), cfg, tb);
    const double numerator = L.value - std::log(cfg.delta);
    BoundReport r;
    r.flags.L_ok = !L.below_10;
    r.per_arm_terms.resize(inst.num_arms());
    for (std::size_t k = 0; k < inst.num_arms(); ++k) {
        const double theta = theta_k(cfg.epsilon, tb.eps0(), inst.mu_star() - inst.arm(k).mu_star());
        r.per_arm_terms[k] = numerator / tail_at(tb, theta, "Theta_k");
    }
    r.constant_term = static_cast<double>(inst.num_arms());
    r.value = sum(r.per_arm_terms) + r.constant_term;
    return r;
}

BoundReport lower_bound_unified(std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb) {
    check_epsilon(cfg.epsilon);
    check_delta(cfg.delta);
    BoundReport r;
    r.flags.concavity_ok = tb.is_concave();
    r.flags.delta_ok = cfg.delta <= lower_bound_delta_max();
    const double per_arm = std::log(3.0 / (20.0 * cfg.delta)) / (16.0 * tail_at(tb, cfg.epsilon, "epsilon"));
    r.per_arm_terms.assign(num_arms, per_arm);
    r.value = per_arm * static_cast<double>(num_arms);
    return r;
}

BoundReport upper_bound_unified(std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb) {
    check_epsilon(cfg.epsilon);
    check_delta(cfg.delta);
    BoundReport r;
    const double per_arm = -std::log(cfg.delta) / tail_at(tb, cfg.epsilon, "epsilon");
    r.per_arm_terms.assign(num_arms, per_arm);
    r.constant_term = 2.0;
    r.value = per_arm * static_cast<double>(num_arms) + r.constant_term;
    r.exact_count = unified_sample_count(num_arms, cfg, tb);
    return r;
}

EpsPrime optimistic_eps_prime(std::size_t num_arms, double L_minus_ln_delta, double epsilon, double alpha,
                              const TailBound& tb) {
    if (!(alpha > 0.0) || alpha > 1.0) throw DomainError("optimistic robustness needs alpha in (0, 1]");
    // At alpha = 1 the inverse's argument is G_*(eps) itself.
    if (alpha == 1.0) return {epsilon, false};
    const double arg = std::pow(static_cast<double>(num_arms) * L_minus_ln_delta, 1.0 - alpha) *
                       std::pow(tb.evaluate(epsilon), alpha);
    if (arg > tb.at_eps0()) return {tb.eps0(), true};
    return {tb.inverse(arg), false};
}

RobustnessReport robustness_optimistic(const BanditInstance& inst, const PolicyConfig& cfg, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) throw DomainError("optimistic robustness needs alpha in (0, 1]");
    check_epsilon(cfg.epsilon);
    check_delta(cfg.delta);
    const TailBound& tb = inst.tail_bound();
    const std::size_t K = inst.num_arms();
    const LogTerm L = compute_L(K, cfg, tb);
    const double numerator = L.value - std::log(cfg.delta);

    RobustnessReport r;
    r.alpha = alpha;
    r.flags.L_ok = !L.below_10;
    const EpsPrime ep = optimistic_eps_prime(K, numerator, cfg.epsilon, alpha, tb);
    r.eps_prime = ep.value;
    r.beyond_domain = ep.beyond_domain;
    r.delta_prime = std::pow(cfg.delta, alpha);

    double adaptive = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double theta_bar = theta_k(cfg.epsilon, tb.eps0(), inst.mu_star() - r.eps_prime - inst.arm(k).mu_star());
        adaptive += numerator / tail_at(tb, theta_bar, "Theta_bar_k");
    }
    const double runaway =
        std::pow(static_cast<double>(K) * numerator / tail_at(tb, cfg.epsilon, "epsilon"), 1.0 - alpha);
    r.complexity_bound = (1.0 - r.delta_prime) * adaptive + r.delta_prime * runaway + static_cast<double>(K);
    return r;
}

RobustnessReport robustness_conservative(const PolicyConfig& cfg, double L, double alpha) {
    if (!(alpha >= 1.0)) throw DomainError("conservative robustness needs alpha >= 1");
    check_delta(cfg.delta);
    RobustnessReport r;
    r.alpha = alpha;
    r.eps_prime = cfg.epsilon;
    r.flags.L_ok = L >= kMinValidL;
    r.delta_prime = std::pow(cfg.delta, alpha) * std::exp(-(alpha - 1.0) * L);
    return r;
}

RobustnessReport robustness_conservative(const BanditInstance& inst, const PolicyConfig& cfg, double alpha) {
    const LogTerm L = compute_L(inst.num_arms(), cfg, inst.tail_bound());
    RobustnessReport r = robustness_conservative(cfg, L.value, alpha);
    r.complexity_bound = upper_bound_max_cb(inst, cfg).value;
    return r;
}

}  // namespace maxbandit
