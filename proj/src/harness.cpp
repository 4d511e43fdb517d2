#include "maxbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "maxbandit/errors.hpp"

namespace maxbandit {

const char* to_string(PolicyKind p) { return p == PolicyKind::max_cb ? "max_cb" : "unified"; }

PolicyKind policy_from_string(const std::string& name) {
    if (name == "max_cb" || name == "max-cb") return PolicyKind::max_cb;
    if (name == "unified") return PolicyKind::unified;
    throw InputError("unknown policy '" + name + "' (expected max_cb or unified)");
}

CorrectnessEstimate estimate_correctness(std::uint64_t failures, std::uint64_t trials, double z) {
    if (trials == 0) throw DomainError("correctness estimate needs at least one trial");
    if (failures > trials) throw DomainError("failures cannot exceed trials");
    const double n = static_cast<double>(trials);
    const double p = 1.0 - static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    // Rounding can put an endpoint a hair on the wrong side of p at p = 0 or 1.
    return {p, std::clamp(centre - half, 0.0, p), std::clamp(centre + half, p, 1.0)};
}

namespace {

TrialRecord run_trial(const ExperimentSpec& spec, std::uint64_t trial) {
    const BanditInstance& inst = *spec.instance;
    InstanceSampler sampler(inst, spec.master_seed, trial);
    RunTrace trace = spec.policy == PolicyKind::max_cb
                         ? run_max_cb(sampler, spec.cfg, inst.tail_bound(), spec.max_cb_options)
                         : run_unified(sampler, inst.num_arms(), spec.cfg, inst.tail_bound());
    TrialRecord rec;
    rec.trial = trial;
    rec.returned_value = trace.returned_value;
    rec.total_samples = trace.total_samples;
    rec.failed = trace.returned_value <= inst.mu_star() - spec.cfg.epsilon;
    rec.hit_safety_cap = trace.termination == Termination::hit_safety_cap;
    rec.per_arm_counts = std::move(trace.per_arm_counts);
    return rec;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (!spec.instance) throw InputError("experiment has no instance");
    if (spec.num_trials == 0) throw InputError("experiment needs at least one trial");
    spec.cfg.validate(spec.instance->tail_bound());

    std::vector<TrialRecord> records(spec.num_trials);
    unsigned workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, spec.num_trials));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= spec.num_trials) return;
            try {
                records[i] = run_trial(spec, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = spec.num_trials;
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return aggregate_trials(spec, std::move(records));
}

ExperimentReport aggregate_trials(const ExperimentSpec& spec, std::vector<TrialRecord> records) {
    if (records.empty()) throw InputError("no trial records to aggregate");
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.trial < b.trial; });

    const BanditInstance& inst = *spec.instance;
    const std::size_t K = inst.num_arms();
    ExperimentReport rep;
    rep.policy = spec.policy;
    rep.cfg = spec.cfg;
    rep.master_seed = spec.master_seed;
    rep.num_arms = K;
    rep.reference_max = inst.mu_star();
    rep.trials = records.size();
    rep.assumption = verify_assumption(inst, spec.grid_points);

    // Integer accumulation keeps the sample statistics exact.
    unsigned __int128 sum_t = 0;
    unsigned __int128 sum_t2 = 0;
    std::vector<std::uint64_t> arm_sums(K, 0);
    rep.samples.min = records.front().total_samples;
    rep.samples.max = records.front().total_samples;
    rep.min_returned = records.front().returned_value;
    rep.max_returned = records.front().returned_value;
    double sum_v = 0.0;
    const double fail_at = inst.mu_star() - spec.cfg.epsilon;
    for (auto& r : records) {
        r.failed = r.returned_value <= fail_at;
        rep.failures += r.failed ? 1 : 0;
        rep.safety_cap_hits += r.hit_safety_cap ? 1 : 0;
        sum_t += r.total_samples;
        sum_t2 += static_cast<unsigned __int128>(r.total_samples) * r.total_samples;
        rep.samples.min = std::min(rep.samples.min, r.total_samples);
        rep.samples.max = std::max(rep.samples.max, r.total_samples);
        for (std::size_t k = 0; k < K && k < r.per_arm_counts.size(); ++k) arm_sums[k] += r.per_arm_counts[k];
        sum_v += r.returned_value;
        rep.min_returned = std::min(rep.min_returned, r.returned_value);
        rep.max_returned = std::max(rep.max_returned, r.returned_value);
    }
    const auto n = static_cast<unsigned __int128>(records.size());
    const double nd = static_cast<double>(records.size());
    rep.samples.mean = static_cast<double>(sum_t) / nd;
    if (records.size() > 1) {
        const unsigned __int128 numer = n * sum_t2 - sum_t * sum_t;
        rep.samples.stddev = std::sqrt(static_cast<double>(numer) / (nd * (nd - 1.0)));
    }
    rep.samples.per_arm_mean.resize(K);
    for (std::size_t k = 0; k < K; ++k) rep.samples.per_arm_mean[k] = static_cast<double>(arm_sums[k]) / nd;
    rep.mean_returned = sum_v / nd;
    rep.correctness = estimate_correctness(rep.failures, rep.trials);

    if (spec.policy == PolicyKind::max_cb) {
        const LogTerm L = compute_L(K, spec.cfg, inst.tail_bound());
        rep.deterministic_cap = K * max_cb_per_arm_limit(L.value, spec.cfg, inst.tail_bound());
    }
    rep.records = std::move(records);
    rep.bounds = compare_bounds(&rep, inst, spec.cfg, spec.policy);
    return rep;
}

BoundComparison compare_bounds(const ExperimentReport* report, const BanditInstance& inst, const PolicyConfig& cfg,
                               PolicyKind policy) {
    BoundComparison cmp;
    cmp.policy = policy;
    if (policy == PolicyKind::max_cb) {
        cmp.lower = lower_bound_multi(inst, cfg);
        cmp.upper = upper_bound_max_cb(inst, cfg);
    } else {
        cmp.lower = lower_bound_unified(inst.num_arms(), cfg, inst.tail_bound());
        cmp.upper = upper_bound_unified(inst.num_arms(), cfg, inst.tail_bound());
    }
    if (report) {
        cmp.empirical_mean = report->samples.mean;
        if (report->samples.mean > 0.0) cmp.ratio_upper_to_empirical = cmp.upper.value / report->samples.mean;

        const AssumptionReport& a = report->assumption;
        if (policy == PolicyKind::max_cb && std::isfinite(a.min_ratio)) {
            if (!a.certified && a.min_ratio > 0.0 && a.min_ratio < 1.0)
                cmp.robustness = robustness_optimistic(inst, cfg, a.min_ratio);
            else if (a.certified && a.min_ratio > 1.0)
                cmp.robustness = robustness_conservative(inst, cfg, a.min_ratio);
        }
    }
    return cmp;
}

}  // namespace maxbandit
