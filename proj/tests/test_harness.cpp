#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "maxbandit/errors.hpp"
#include "maxbandit/harness.hpp"
#include "maxbandit/io.hpp"
#include "oracles.hpp"

using namespace maxbandit;

namespace {

const double kInvE = std::exp(-1.0);

std::shared_ptr<const BanditInstance> single_arm() {
    return std::make_shared<const BanditInstance>(std::vector<ArmPtr>{make_arm(ArmModel::uniform(0.0, 1.0))},
                                                  TailBound::power_law(1.0, 1.0, 1.0));
}

std::shared_ptr<const BanditInstance> two_arm() {
    return std::make_shared<const BanditInstance>(
        std::vector<ArmPtr>{make_arm(ArmModel::uniform(0.9, 1.0)), make_arm(ArmModel::uniform(0.0, 0.1))},
        TailBound::power_law(1.0, 1.0, 1.0));
}

}  // namespace

TEST_CASE("wilson interval") {
    const auto none = estimate_correctness(0, 100);
    CHECK(none.rate == 1.0);
    CHECK(none.wilson_low == doctest::Approx(0.9630051925).epsilon(1e-9));
    CHECK(none.wilson_high == doctest::Approx(1.0));

    const auto five = estimate_correctness(5, 100);
    CHECK(five.rate == doctest::Approx(0.95));
    CHECK(five.wilson_low == doctest::Approx(0.8882480347).epsilon(1e-9));
    CHECK(five.wilson_high == doctest::Approx(0.9784566385).epsilon(1e-9));

    for (std::uint64_t n : {1u, 7u, 100u, 2000u}) {
        for (std::uint64_t f = 0; f <= n; f += std::max<std::uint64_t>(1, n / 13)) {
            const auto e = estimate_correctness(f, n);
            const auto [lo, hi] = oracle::wilson_by_bisection(static_cast<double>(n - f), static_cast<double>(n), 1.96);
            CAPTURE(n);
            CAPTURE(f);
            CHECK(e.wilson_low == doctest::Approx(lo).epsilon(1e-9));
            CHECK(e.wilson_high == doctest::Approx(hi).epsilon(1e-9));
            CHECK(e.wilson_low <= e.rate);
            CHECK(e.rate <= e.wilson_high);
            // Swapping successes and failures mirrors the interval.
            const auto m = estimate_correctness(n - f, n);
            CHECK(m.wilson_low == doctest::Approx(1.0 - e.wilson_high).epsilon(1e-9));
        }
    }
    CHECK_THROWS(estimate_correctness(0, 0));
}

TEST_CASE("point masses never fail") {
    const ArmPtr pm = make_arm(ArmModel::point_mass(0.4));
    auto inst = std::make_shared<const BanditInstance>(std::vector<ArmPtr>{pm, pm}, TailBound::power_law(0.5, 1.0, 1.0));
    for (PolicyKind p : {PolicyKind::max_cb, PolicyKind::unified}) {
        ExperimentSpec spec{inst, p, {0.05, 0.1}, 50, 3};
        const ExperimentReport r = run_experiment(spec);
        CHECK(r.failures == 0);
        CHECK(r.correctness.rate == 1.0);
        CHECK(r.min_returned == 0.4);
        CHECK(r.max_returned == 0.4);
    }
}

TEST_CASE("single arm: T = 154 and the upper bound") {
    ExperimentSpec spec{single_arm(), PolicyKind::max_cb, {0.1, kInvE}, 200, 11};
    spec.workers = 3;
    const ExperimentReport r = run_experiment(spec);
    CHECK(r.samples.min == 154);
    CHECK(r.samples.max == 154);
    CHECK(r.samples.mean == 154.0);
    CHECK(r.samples.stddev == 0.0);
    REQUIRE(r.bounds.empirical_mean);
    CHECK(r.bounds.upper.value == doctest::Approx(154.87).epsilon(1e-4));
    REQUIRE(r.bounds.ratio_upper_to_empirical);
    CHECK(*r.bounds.ratio_upper_to_empirical == doctest::Approx(154.8734 / 154.0).epsilon(1e-4));
    CHECK(r.records.size() == 200);
    for (std::size_t i = 0; i < r.records.size(); ++i) CHECK(r.records[i].trial == i);
}

TEST_CASE("unified policy draws exactly 232 samples") {
    std::vector<ArmPtr> arms;
    for (int i = 0; i < 10; ++i) arms.push_back(make_arm(ArmModel::uniform(0.0, 0.1 + 0.09 * i)));
    auto inst = std::make_shared<const BanditInstance>(arms, TailBound::power_law(0.1, 1.0, 1.0));
    ExperimentSpec spec{inst, PolicyKind::unified, {1.0, 0.1}, 100, 5};
    spec.workers = 4;
    const ExperimentReport r = run_experiment(spec);
    CHECK(r.samples.min == 232);
    CHECK(r.samples.max == 232);
    REQUIRE(r.bounds.upper.exact_count);
    CHECK(*r.bounds.upper.exact_count == 232);
    double per_arm_total = 0.0;
    for (double m : r.samples.per_arm_mean) per_arm_total += m;
    CHECK(per_arm_total == doctest::Approx(232.0));
}

TEST_CASE("two-arm instance: correctness and counts") {
    ExperimentSpec spec{two_arm(), PolicyKind::max_cb, {0.02, 0.1}, 1000, 7};
    spec.workers = 4;
    const ExperimentReport r = run_experiment(spec);
    CHECK(r.correctness.wilson_low >= 0.9);
    CHECK(r.safety_cap_hits == 0);
    CHECK(r.samples.mean <= r.bounds.upper.value);
    REQUIRE(r.deterministic_cap);
    CHECK(r.samples.max <= *r.deterministic_cap);
    CHECK(r.reference_max == 1.0);
    CHECK(r.samples.per_arm_mean[1] < 0.2 * r.samples.per_arm_mean[0]);
    CHECK_FALSE(r.bounds.robustness);
}

TEST_CASE("report does not depend on worker count or record order") {
    std::mt19937_64 rng(77);
    const auto inst = oracle::random_certified_instance(rng);
    ExperimentSpec spec{inst, PolicyKind::max_cb, {inst->tail_bound().eps0() * 0.2, 0.05}, 120, 99};
    spec.workers = 1;
    const ExperimentReport one = run_experiment(spec);
    const std::string ref = io::report_to_json(one).dump();
    for (unsigned w : {2u, 5u, 0u}) {
        spec.workers = w;
        CHECK(io::report_to_json(run_experiment(spec)).dump() == ref);
    }
    std::vector<TrialRecord> shuffled = one.records;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const ExperimentReport again = aggregate_trials(spec, shuffled);
    CHECK(io::report_to_json(again).dump() == ref);
    CHECK(again.records.front().trial == 0);
}

TEST_CASE("failure means V <= mu* - eps") {
    ExperimentSpec spec{two_arm(), PolicyKind::max_cb, {0.02, 0.1}, 3, 0};
    std::vector<TrialRecord> recs(3);
    recs[0] = {0, 0.98, 10, false, false, {5, 5}};
    recs[1] = {1, 0.980001, 10, false, false, {5, 5}};
    recs[2] = {2, 0.5, 10, false, false, {5, 5}};
    // aggregate_trials recomputes the failure flag from the returned value.
    const ExperimentReport r = aggregate_trials(spec, recs);
    CHECK(r.failures == 2);
    CHECK(r.records[0].failed);
    CHECK_FALSE(r.records[1].failed);
}

TEST_CASE("safety cap is counted") {
    ExperimentSpec spec{two_arm(), PolicyKind::max_cb, {0.02, 0.1}, 20, 1};
    spec.max_cb_options.safety_cap = 50;
    const ExperimentReport r = run_experiment(spec);
    CHECK(r.safety_cap_hits == 20);
    CHECK(r.samples.max <= 50);
}

TEST_CASE("robustness is attached for uncertified instances") {
    // Uniform(-1, 1) has tail eps / 2: the bound eps is optimistic by a factor 2.
    auto inst = std::make_shared<const BanditInstance>(std::vector<ArmPtr>{make_arm(ArmModel::uniform(-1.0, 1.0))},
                                                       TailBound::power_law(1.0, 1.0, 1.0));
    REQUIRE_FALSE(inst->certified());
    ExperimentSpec spec{inst, PolicyKind::max_cb, {0.1, 0.05}, 20, 2};
    const ExperimentReport r = run_experiment(spec);
    REQUIRE(r.bounds.robustness);
    CHECK(r.bounds.robustness->alpha == doctest::Approx(0.5).epsilon(1e-9));

    // Uniform(0, 0.5) has tail 2 eps: conservative by a factor 2.
    auto cons = std::make_shared<const BanditInstance>(std::vector<ArmPtr>{make_arm(ArmModel::uniform(0.0, 0.5))},
                                                       TailBound::power_law(0.5, 1.0, 1.0));
    ExperimentSpec spec2{cons, PolicyKind::max_cb, {0.1, 0.05}, 20, 2};
    const ExperimentReport r2 = run_experiment(spec2);
    REQUIRE(r2.bounds.robustness);
    CHECK(r2.bounds.robustness->alpha == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r2.bounds.robustness->delta_prime < 0.05);
}

TEST_CASE("policy names") {
    CHECK(policy_from_string("max_cb") == PolicyKind::max_cb);
    CHECK(policy_from_string("max-cb") == PolicyKind::max_cb);
    CHECK(policy_from_string("unified") == PolicyKind::unified);
    CHECK_THROWS_AS(policy_from_string("ucb"), InputError);
    CHECK(std::string(to_string(PolicyKind::unified)) == "unified");
}
