#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "maxbandit/errors.hpp"
#include "maxbandit/io.hpp"
#include "oracles.hpp"

using namespace maxbandit;
using io::json;

namespace {

void check_same_cdf(const ArmModel& a, const ArmModel& b) {
    CHECK(a.mu_star() == doctest::Approx(b.mu_star()).epsilon(1e-15));
    const double lo = std::min(a.support_min(), b.support_min()) - 0.1;
    const double hi = a.mu_star() + 0.1;
    for (int i = 0; i <= 500; ++i) {
        const double mu = lo + (hi - lo) * i / 500.0;
        CHECK(a.cdf(mu) == doctest::Approx(b.cdf(mu)).epsilon(1e-12));
    }
}

std::vector<ArmPtr> every_family() {
    const auto tb = TailBound::power_law(0.5, 0.5, 0.6);
    const ArmPtr u = make_arm(ArmModel::uniform(0.0, 1.0));
    return {u,
            make_arm(ArmModel::power_tail(1.0, 0.5, 2.0, 1.0)),
            make_arm(ArmModel::power_tail(2.0, 0.8, 1.0, 0.5)),
            make_arm(ArmModel::point_mass(0.3)),
            make_arm(ArmModel::piecewise({CdfSegment::linear(-1.0, 0.0, 0.0, 0.3), CdfSegment::constant(0.0, 0.2, 0.5),
                                          CdfSegment::tail_reflect(0.2, 0.8, 0.8, 0.5 / tb.evaluate(0.6), tb)})),
            make_arm(ArmModel::mixture({u, make_arm(ArmModel::uniform(0.5, 2.0))}))};
}

}  // namespace

TEST_CASE("tail bounds round trip") {
    for (const TailBound& tb : {TailBound::power_law(0.01, 1.0, 1.0), TailBound::power_law(0.3, 0.7, 0.9),
                                TailBound::tabulated({{0.0, 0.0}, {0.5, 0.05}, {1.0, 0.5}}),
                                TailBound::tabulated({{0.0, 0.0}, {0.2, 0.1}, {0.6, 0.2}}, 0.5)}) {
        const json j = io::tail_bound_to_json(tb);
        const TailBound back = io::tail_bound_from_json(j);
        CHECK(io::tail_bound_to_json(back) == j);
        CHECK(back.eps0() == tb.eps0());
        for (int i = 0; i <= 100; ++i) {
            const double e = tb.eps0() * i / 100.0;
            CHECK(back.evaluate(e) == tb.evaluate(e));
        }
    }
    CHECK(io::tail_bound_from_json(json::parse(R"({"kind":"power_law","A":2,"beta":1,"eps0":0.5})")).at_eps0() == 1.0);
}

TEST_CASE("every arm family round trips") {
    for (const ArmPtr& arm : every_family()) {
        const json j = io::arm_to_json(*arm);
        const ArmPtr back = io::arm_from_json(j);
        CHECK(io::arm_to_json(*back) == j);
        check_same_cdf(*arm, *back);
        // Through text as well: full precision survives dump and parse.
        check_same_cdf(*arm, *io::arm_from_json(json::parse(j.dump())));
    }
}

TEST_CASE("identical arms collapse into a count") {
    const ArmPtr a = make_arm(ArmModel::uniform(0.0, 0.1));
    const ArmPtr b = make_arm(ArmModel::uniform(0.0, 0.9));
    const json j = io::arms_to_json({b, a, a, a, b});
    REQUIRE(j.size() == 3);
    CHECK_FALSE(j[0].contains("count"));
    CHECK(j[1]["count"] == 3);
    const auto back = io::arms_from_json(j);
    REQUIRE(back.size() == 5);
    CHECK(back[1] == back[3]);
    CHECK(back[4]->mu_star() == 0.9);
}

TEST_CASE("instance documents") {
    const auto doc = io::load_instance_document(std::string(MAXBANDIT_SOURCE_DIR) + "/instances/reference1.json");
    CHECK(doc.arms.size() == 10000);
    REQUIRE(doc.epsilon);
    CHECK(*doc.epsilon == 1e-4);
    CHECK(*doc.delta == 1e-3);
    const auto inst = doc.build();
    CHECK(inst->mu_star() == 0.9);
    CHECK(inst->certified());

    const json out = io::instance_to_json(*inst, PolicyConfig{1e-4, 1e-3});
    const auto again = io::parse_instance_document(out).build();
    CHECK(again->num_arms() == 10000);
    CHECK(io::instance_to_json(*again, PolicyConfig{1e-4, 1e-3}) == out);

    const auto two = io::load_instance_document(std::string(MAXBANDIT_SOURCE_DIR) + "/instances/two_arm.json");
    CHECK(*two.experiment.seed == 7);
    CHECK(*two.experiment.trials == 1000);
    CHECK(*two.experiment.workers == 4);
    CHECK(*two.experiment.policy == "max_cb");
}

TEST_CASE("schema errors are input errors") {
    const char* bad[] = {
        R"({"arms":[{"family":"uniform","a":0,"b":1}]})",
        R"({"tail_bound":{"kind":"power-law","A":1,"beta":1,"eps0":1}})",
        R"({"tail_bound":{"kind":"power-law","A":1,"beta":1,"eps0":1},"arms":[]})",
        R"({"tail_bound":{"kind":"exp","A":1},"arms":[{"family":"uniform","a":0,"b":1}]})",
        R"({"tail_bound":{"kind":"power-law","A":"1","beta":1,"eps0":1},"arms":[{"family":"uniform","a":0,"b":1}]})",
        R"({"tail_bound":{"kind":"power-law","A":1,"beta":1,"eps0":1},"arms":[{"family":"gauss"}]})",
        R"({"tail_bound":{"kind":"power-law","A":1,"beta":1,"eps0":1},"arms":[{"family":"uniform","a":0}]})",
        R"({"tail_bound":{"kind":"power-law","A":1,"beta":1,"eps0":1},"arms":[{"family":"uniform","a":0,"b":1,"count":0}]})",
        R"({"tail_bound":{"kind":"tabulated","knots":[[0,0],[1]]},"arms":[{"family":"uniform","a":0,"b":1}]})",
        R"({"tail_bound":{"kind":"power-law","A":1,"beta":1,"eps0":1},"arms":[{"family":"uniform","a":0,"b":1}],"config":{"epsilon":"x"}})",
        R"({"tail_bound":{"kind":"power-law","A":1,"beta":1,"eps0":1},"arms":[{"family":"piecewise-cdf","segments":[{"kind":"spline"}]}]})",
        R"([1,2,3])",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(io::parse_instance_document(json::parse(text)), InputError);
    }
    CHECK_THROWS_AS(io::load_instance_document("/nonexistent/instance.json"), InputError);
}

TEST_CASE("hypothesis export re-ingests to the same model") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const auto inst = oracle::random_certified_instance(rng);
        const PolicyConfig cfg{inst->tail_bound().eps0() * 0.3, 0.001};
        for (std::size_t k = 0; k < inst->num_arms(); ++k) {
            const HypothesisInstance h = build_hypothesis(inst, k, cfg);
            const json j = io::instance_to_json(*h.instance, cfg);
            const auto back = io::parse_instance_document(json::parse(j.dump())).build();
            CAPTURE(i);
            CAPTURE(k);
            CHECK(back->certified());
            CHECK(back->mu_star() == h.lifted_max);
            check_same_cdf(*h.modified_cdf, back->arm(k));
            CHECK(upper_bound_max_cb(*back, cfg).value ==
                  doctest::Approx(upper_bound_max_cb(*h.instance, cfg).value).epsilon(1e-9));
        }
    }
}

TEST_CASE("report json and trial csv") {
    auto inst = std::make_shared<const BanditInstance>(
        std::vector<ArmPtr>{make_arm(ArmModel::uniform(0.9, 1.0)), make_arm(ArmModel::uniform(0.0, 0.1))},
        TailBound::power_law(1.0, 1.0, 1.0));
    ExperimentSpec spec{inst, PolicyKind::max_cb, {0.02, 0.1}, 5, 7};
    const ExperimentReport r = run_experiment(spec);
    const json j = io::report_to_json(r);
    CHECK(j["policy"] == "max_cb");
    CHECK(j["trials"] == 5);
    CHECK(j["num_arms"] == 2);
    CHECK(j["bound_comparison"]["upper"]["value"].get<double>() == r.bounds.upper.value);
    CHECK_FALSE(j.contains("records"));
    CHECK_FALSE(j.contains("workers"));

    std::ostringstream os;
    io::write_trials_csv(os, r.records, 2);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "trial,V,T,failed,count_0,count_1");
    int rows = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 6);
        const TrialRecord& rec = r.records[rows];
        CHECK(std::stoull(cells[0]) == rec.trial);
        CHECK(std::stod(cells[1]) == rec.returned_value);
        CHECK(std::stoull(cells[2]) == rec.total_samples);
        CHECK(std::stoull(cells[4]) + std::stoull(cells[5]) == rec.total_samples);
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("number formatting") {
    CHECK(io::format_sig3(3.52472560e8) == "3.52e8");
    CHECK(io::format_sig3(1.56643067e12) == "1.56e12");
    CHECK(io::format_sig3(6.90775527918e10) == "6.9e10");
    CHECK(io::format_sig3(3.13164706e9) == "3.13e9");
    CHECK(io::format_sig3(154.87) == "154");
    CHECK(io::format_sig3(0.998001) == "0.998");
    CHECK(io::format_sig3(1.0) == "1");
    CHECK(io::format_sig3(2.5e-4) == "2.5e-4");
    CHECK(io::format_sig3(-3.52e8) == "-3.52e8");
    CHECK(io::format_sig3(0.0) == "0");
    for (double x : {0.1, 1.0 / 3.0, 6.90775527918e10, 1e-300, 149.750974851728}) {
        CHECK(std::stod(io::format_full(x)) == x);
    }
}
