#include "maxbandit/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "maxbandit/bounds.hpp"
#include "maxbandit/errors.hpp"

namespace maxbandit {

namespace {

void require_certified(const BanditInstance& inst) {
    if (!inst.certified())
        throw ConstructionError("hypotheses need a certified base instance (tail bound assumption violated at arm " +
                                std::to_string(inst.assumption().worst_arm) + ")");
}

// G_* at a gap that may overshoot eps0 by rounding.
double tail_clamped(const TailBound& tb, double x) { return tb.evaluate(std::clamp(x, 0.0, tb.eps0())); }

}  // namespace

const char* to_string(HypothesisCase c) {
    switch (c) {
        case HypothesisCase::case1:
            return "case1";
        case HypothesisCase::case2:
            return "case2";
        case HypothesisCase::unified:
            return "unified";
    }
    return "?";
}

double f_star(double mu, double mu_star_global, double eps, const TailBound& tb) {
    const double top = mu_star_global + eps;
    if (mu >= top) return 1.0;
    // evaluate() rejects gaps beyond eps0 (up to rounding slack).
    return 1.0 - tb.evaluate(top - mu);
}

MinSamples min_samples_t_k(const BanditInstance& inst, std::size_t k, const PolicyConfig& cfg) {
    if (k >= inst.num_arms()) throw InputError("arm index out of range");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
    const TailBound& tb = inst.tail_bound();
    const double top = inst.mu_star() + cfg.epsilon;
    const double mk = inst.arm(k).mu_star();
    MinSamples out;
    out.gamma = (mk < top - tb.eps0()) ? tb.at_eps0() : tail_clamped(tb, top - mk);
    if (!(out.gamma > 0.0)) throw DomainError("gamma_k vanishes");
    out.delta_ok = cfg.delta <= lower_bound_delta_max();
    out.value = std::log(3.0 / (20.0 * cfg.delta)) / (16.0 * out.gamma);
    return out;
}

HypothesisInstance build_hypothesis(std::shared_ptr<const BanditInstance> inst, std::size_t k, const PolicyConfig& cfg) {
    if (!inst) throw InputError("null base instance");
    if (k >= inst->num_arms()) throw InputError("arm index out of range");
    const TailBound& tb = inst->tail_bound();
    cfg.validate(tb);
    require_certified(*inst);

    const ArmPtr& arm = inst->arms()[k];
    const double mk = arm->mu_star();
    const double top = inst->mu_star() + cfg.epsilon;
    const double threshold = top - tb.eps0();

    HypothesisInstance h;
    h.base = inst;
    h.modified_arm = k;
    h.lifted_max = top;
    h.concavity_ok = tb.is_concave();
    h.params.t_k = min_samples_t_k(*inst, k, cfg).value;

    std::vector<CdfSegment> segs;
    if (mk < threshold) {
        h.case_tag = HypothesisCase::case1;
        const double gamma = 1.0 - tb.at_eps0();
        h.params.gamma = gamma;
        h.params.mu_bar = mk;
        h.params.f_mu_bar = 1.0;
        segs.push_back(CdfSegment::affine_cdf(arm->support_min(), mk, gamma, 0.0, {arm}));
        segs.push_back(CdfSegment::constant(mk, threshold, gamma * arm->cdf(mk)));
        segs.push_back(CdfSegment::tail_reflect(threshold, top, top, 1.0, tb));
    } else {
        h.case_tag = HypothesisCase::case2;
        const double lift = tail_clamped(tb, top - mk);
        const double p_eps = std::min(1.0 - tb.at_eps0() + lift, 1.0);
        const double mu_bar = arm->upper_quantile(p_eps);
        const double f_bar = arm->cdf(mu_bar);
        if (!(f_bar > 0.0)) throw ConstructionError("F_k vanishes at mu-bar_k");
        const double gamma = 1.0 - lift / f_bar;
        h.params.gamma = gamma;
        h.params.p_eps = p_eps;
        h.params.mu_bar = mu_bar;
        h.params.f_mu_bar = f_bar;
        if (arm->support_min() < mu_bar)
            segs.push_back(CdfSegment::affine_cdf(arm->support_min(), mu_bar, gamma, 0.0, {arm}));
        if (mu_bar < mk) segs.push_back(CdfSegment::affine_cdf(mu_bar, mk, 1.0, (gamma - 1.0) * f_bar, {arm}));
        segs.push_back(CdfSegment::tail_reflect(mk, top, top, 1.0, tb));
    }
    h.modified_cdf = make_arm(ArmModel::piecewise(std::move(segs)));

    std::vector<ArmPtr> arms = inst->arms();
    arms[k] = h.modified_cdf;
    h.instance = std::make_shared<const BanditInstance>(std::move(arms), tb);
    return h;
}

HypothesisInstance build_unified_hypothesis(std::shared_ptr<const BanditInstance> inst, const PolicyConfig& cfg) {
    if (!inst) throw InputError("null base instance");
    const TailBound& tb = inst->tail_bound();
    cfg.validate(tb);
    require_certified(*inst);

    const std::vector<ArmPtr>& arms = inst->arms();
    const double K = static_cast<double>(arms.size());
    const double mu_star = inst->mu_star();
    const double top = mu_star + cfg.epsilon;
    const ArmPtr unified = arms.size() == 1 ? arms.front() : make_arm(ArmModel::mixture(arms));

    const double g_eps = tb.evaluate(cfg.epsilon);
    const double p_eps = std::min(1.0 - tb.at_eps0() / K + g_eps / K, 1.0);
    const double mu_bar = unified->upper_quantile(p_eps);
    const double f_bar = unified->cdf(mu_bar);
    if (!(f_bar > 0.0)) throw ConstructionError("unified CDF vanishes at mu-bar");
    const double gamma = 1.0 - g_eps / (K * f_bar);

    HypothesisInstance h;
    h.base = inst;
    h.case_tag = HypothesisCase::unified;
    h.lifted_max = top;
    h.concavity_ok = tb.is_concave();
    h.params.gamma = gamma;
    h.params.p_eps = p_eps;
    h.params.mu_bar = mu_bar;
    h.params.f_mu_bar = f_bar;
    h.params.t_k = std::log(3.0 / (20.0 * cfg.delta)) / (16.0 * g_eps / K);

    std::vector<CdfSegment> segs;
    if (unified->support_min() < mu_bar)
        segs.push_back(CdfSegment::affine_cdf(unified->support_min(), mu_bar, gamma, 0.0, arms));
    if (mu_bar < mu_star) segs.push_back(CdfSegment::affine_cdf(mu_bar, mu_star, 1.0, (gamma - 1.0) * f_bar, arms));
    segs.push_back(CdfSegment::tail_reflect(mu_star, top, top, 1.0 / K, tb));
    h.modified_cdf = make_arm(ArmModel::piecewise(std::move(segs)));

    h.instance = std::make_shared<const BanditInstance>(std::vector<ArmPtr>{h.modified_cdf}, tb.scaled(1.0 / K));
    return h;
}

}  // namespace maxbandit
