#include "maxbandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxbandit/errors.hpp"

namespace maxbandit {

namespace {

double positive_tail_at_epsilon(const PolicyConfig& cfg, const TailBound& tb) {
    const double g = tb.evaluate(cfg.epsilon);
    if (!(g > 0.0)) throw DomainError("G_*(epsilon) must be positive");
    return g;
}

std::uint64_t to_count(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0 || x >= 9.2e18) throw DomainError(std::string(what) + " is not representable");
    return static_cast<std::uint64_t>(x);
}

}  // namespace

void PolicyConfig::validate(const TailBound& tb) const {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (epsilon > tb.eps0() * (1.0 + 1e-12)) throw DomainError("epsilon must not exceed eps0");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

LogTerm compute_L(std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb) {
    if (num_arms == 0) throw DomainError("compute_L needs at least one arm");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
    const double g = positive_tail_at_epsilon(cfg, tb);
    LogTerm L;
    L.value = 6.0 * std::log(static_cast<double>(num_arms) * (1.0 + (-std::log(cfg.delta)) / g));
    L.below_10 = L.value < kMinValidL;
    return L;
}

std::uint64_t compute_N0(double L, const PolicyConfig& cfg, const TailBound& tb) {
    if (!std::isfinite(L)) throw DomainError("L must be finite");
    if (!(tb.at_eps0() > 0.0)) throw DomainError("G_*(eps0) must be positive");
    return to_count(std::floor((L - std::log(cfg.delta)) / tb.at_eps0()), "N0") + 1;
}

double index_width(std::uint64_t count, double L, const PolicyConfig& cfg, const TailBound& tb) {
    if (count == 0) return tb.eps0();
    const double arg = (L - std::log(cfg.delta)) / static_cast<double>(count);
    if (arg >= tb.at_eps0()) return tb.eps0();
    return tb.inverse(arg);
}

std::uint64_t max_cb_per_arm_limit(double L, const PolicyConfig& cfg, const TailBound& tb) {
    const double g = positive_tail_at_epsilon(cfg, tb);
    return to_count(std::floor((L - std::log(cfg.delta)) / g), "per-arm sample limit") + 1;
}

std::uint64_t default_safety_cap(std::size_t num_arms, double L, const PolicyConfig& cfg, const TailBound& tb) {
    return num_arms * max_cb_per_arm_limit(L, cfg, tb) + 1;
}

std::uint64_t unified_sample_count(std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb) {
    if (num_arms == 0) throw DomainError("unified algorithm needs at least one arm");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
    const double g = positive_tail_at_epsilon(cfg, tb);
    return to_count(std::ceil(-std::log(cfg.delta) * static_cast<double>(num_arms) / g), "unified sample count") + 1;
}

// ---------------------------------------------------------------------------

InstanceSampler::InstanceSampler(const BanditInstance& inst, std::uint64_t master_seed, std::uint64_t trial)
    : inst_(&inst),
      master_seed_(master_seed),
      trial_(trial),
      arm_streams_(inst.num_arms()),
      choice_stream_(master_seed, trial, kArmChoiceStream) {}

RandomStream& InstanceSampler::stream(std::size_t arm) {
    auto& s = arm_streams_.at(arm);
    if (!s) s.emplace(master_seed_, trial_, arm);
    return *s;
}

double InstanceSampler::sample(std::size_t arm) { return inst_->arm(arm).sample(stream(arm)); }

UnifiedDraw InstanceSampler::sample_unified() {
    const std::size_t k = num_arms();
    auto arm = static_cast<std::size_t>(choice_stream_.uniform() * static_cast<double>(k));
    arm = std::min(arm, k - 1);
    return {arm, sample(arm)};
}

// ---------------------------------------------------------------------------

RunTrace run_max_cb(ArmSampler& sampler, const PolicyConfig& cfg, const TailBound& tb, const MaxCbOptions& options) {
    const std::size_t K = sampler.num_arms();
    if (K == 0) throw DomainError("Max-CB needs at least one arm");
    cfg.validate(tb);
    if (!options.per_arm_cap.empty() && options.per_arm_cap.size() != K)
        throw DomainError("per-arm cap list must have one entry per arm");

    const LogTerm L = compute_L(K, cfg, tb);
    const std::uint64_t n0 = compute_N0(L.value, cfg, tb);
    const std::uint64_t cap = options.safety_cap ? options.safety_cap : default_safety_cap(K, L.value, cfg, tb);
    auto arm_cap = [&](std::size_t k) {
        return options.per_arm_cap.empty() ? std::numeric_limits<std::uint64_t>::max() : options.per_arm_cap[k];
    };

    RunTrace trace;
    trace.per_arm_counts.assign(K, 0);
    trace.l_below_10 = L.below_10;
    std::vector<double> best(K, -std::numeric_limits<double>::infinity());
    std::vector<double> width(K, tb.eps0());

    auto draw = [&](std::size_t k) {
        const double r = sampler.sample(k);
        ++trace.per_arm_counts[k];
        ++trace.total_samples;
        best[k] = std::max(best[k], r);
        trace.returned_value = std::max(trace.returned_value, r);
    };

    for (std::size_t k = 0; k < K; ++k) {
        const std::uint64_t n = std::min(n0, arm_cap(k));
        for (std::uint64_t i = 0; i < n; ++i) {
            if (trace.total_samples >= cap) {
                trace.termination = Termination::hit_safety_cap;
                return trace;
            }
            draw(k);
        }
        width[k] = index_width(trace.per_arm_counts[k], L.value, cfg, tb);
    }

    for (;;) {
        std::size_t chosen = K;
        double best_index = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            if (trace.per_arm_counts[k] == 0 || trace.per_arm_counts[k] >= arm_cap(k)) continue;
            const double y = best[k] + width[k];
            if (chosen == K || y > best_index) {
                chosen = k;
                best_index = y;
            }
        }
        if (chosen == K || width[chosen] < cfg.epsilon) break;
        if (trace.total_samples >= cap) {
            trace.termination = Termination::hit_safety_cap;
            break;
        }
        draw(chosen);
        width[chosen] = index_width(trace.per_arm_counts[chosen], L.value, cfg, tb);
    }
    return trace;
}

RunTrace run_unified(UnifiedSampler& sampler, std::size_t num_arms, const PolicyConfig& cfg, const TailBound& tb) {
    cfg.validate(tb);
    const std::uint64_t n = unified_sample_count(num_arms, cfg, tb);
    RunTrace trace;
    trace.per_arm_counts.assign(num_arms, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        const UnifiedDraw d = sampler.sample_unified();
        ++trace.per_arm_counts.at(d.arm);
        ++trace.total_samples;
        trace.returned_value = std::max(trace.returned_value, d.reward);
    }
    return trace;
}

}  // namespace maxbandit
