#pragma once

#include <cstddef>
#include <memory>
#include <optional>

#include "maxbandit/instance.hpp"
#include "maxbandit/policies.hpp"

namespace maxbandit {

// Alternative reward models used by the sampling lower bounds. Hypothesis H_k
// keeps every arm except k, and lifts arm k's maximum to mu* + eps while the
// tail-bound assumption still holds. An algorithm that samples arm k too
// rarely under the true model cannot tell the two apart.

enum class HypothesisCase { case1, case2, unified };

const char* to_string(HypothesisCase c);

struct HypothesisParams {
    /// gamma_{k,1}, gamma_{k,2}, or the unified gamma, depending on the case.
    double gamma = 0.0;
    /// P^eps_k; absent in case 1.
    std::optional<double> p_eps;
    /// mu-bar_k and F_k(mu-bar_k) (right-continuous value). Case 1 uses mu*_k and 1.
    double mu_bar = 0.0;
    double f_mu_bar = 1.0;
    /// Minimal expected sample count t_k of the modified arm under the true model.
    double t_k = 0.0;
};

struct HypothesisInstance {
    std::shared_ptr<const BanditInstance> base;
    /// Empty for the unified hypothesis.
    std::optional<std::size_t> modified_arm;
    ArmPtr modified_cdf;
    HypothesisCase case_tag = HypothesisCase::case1;
    HypothesisParams params;
    /// mu* + eps, the essential supremum of modified_cdf.
    double lifted_max = 0.0;
    /// Concavity of G_*, which the assumption-preservation argument relies on.
    bool concavity_ok = true;
    /// The alternative model as an ordinary instance. For the unified hypothesis
    /// it has a single arm and the tail bound G_* / |K|.
    std::shared_ptr<const BanditInstance> instance;
};

/// F_*(mu) = 1 - G_*(mu* + eps - mu) below mu* + eps, 1 from there on.
/// Throws DomainError for mu < mu* + eps - eps0.
double f_star(double mu, double mu_star_global, double eps, const TailBound& tb);

/// Hypothesis H_k for arm k. Throws ConstructionError if the base instance is
/// uncertified or the assembled CDF is not monotone.
HypothesisInstance build_hypothesis(std::shared_ptr<const BanditInstance> inst, std::size_t k, const PolicyConfig& cfg);

/// Hypothesis H_1 of the unified-arm model.
HypothesisInstance build_unified_hypothesis(std::shared_ptr<const BanditInstance> inst, const PolicyConfig& cfg);

struct MinSamples {
    double value = 0.0;
    double gamma = 0.0;
    bool delta_ok = true;
};

/// t_k = ln(3 / (20 delta)) / (16 gamma_k).
MinSamples min_samples_t_k(const BanditInstance& inst, std::size_t k, const PolicyConfig& cfg);

}  // namespace maxbandit
