#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "maxbandit/errors.hpp"
#include "maxbandit/tail_bound.hpp"

using namespace maxbandit;

TEST_CASE("power law evaluation") {
    const auto tb = TailBound::power_law(0.01, 1.0, 1.0);
    CHECK(tb.evaluate(1e-4) == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(tb.evaluate(0.0) == 0.0);
    CHECK(TailBound::power_law(0.5, 2.0, 1.0).evaluate(0.2) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(tb.at_eps0() == doctest::Approx(0.01));
}

TEST_CASE("inverse") {
    const auto tb = TailBound::power_law(0.01, 1.0, 1.0);
    CHECK(tb.inverse(1e-6) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(tb.inverse(tb.at_eps0()) == doctest::Approx(tb.eps0()).epsilon(1e-15));

    const auto tab = TailBound::tabulated({{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}});
    CHECK(tab.inverse(0.25) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tab.eps0() == 1.0);
    CHECK(tab.evaluate(0.75) == doctest::Approx(0.625));
}

TEST_CASE("domain errors") {
    const auto tb = TailBound::power_law(1.0, 1.0, 0.5);
    CHECK_THROWS_AS(tb.evaluate(-0.1), DomainError);
    CHECK_THROWS_AS(tb.evaluate(0.6), DomainError);
    CHECK_THROWS_AS(tb.inverse(0.6), DomainError);
    CHECK_THROWS_AS(tb.inverse(-1e-3), DomainError);
    // Rounding slack at the domain edge is tolerated.
    CHECK_NOTHROW(tb.evaluate(0.5 * (1.0 + 1e-14)));
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(TailBound::power_law(0.0, 1.0, 1.0), InputError);
    CHECK_THROWS_AS(TailBound::power_law(1.0, -1.0, 1.0), InputError);
    CHECK_THROWS_AS(TailBound::power_law(2.0, 1.0, 1.0), InputError);  // G_*(eps0) > 1
    CHECK_NOTHROW(TailBound::power_law(1.0, 1.0, 1.0));                // equality allowed
    CHECK_THROWS_AS(TailBound::tabulated({{0.0, 0.0}}), InputError);
    CHECK_THROWS_AS(TailBound::tabulated({{0.1, 0.0}, {1.0, 0.5}}), InputError);
    CHECK_THROWS_AS(TailBound::tabulated({{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.5}}), InputError);
    CHECK_THROWS_AS(TailBound::tabulated({{0.0, 0.0}, {1.0, 0.5}}, 2.0), InputError);
}

TEST_CASE("concavity flag") {
    CHECK(TailBound::power_law(1.0, 1.0, 1.0).is_concave());
    CHECK(TailBound::power_law(1.0, 0.5, 1.0).is_concave());
    CHECK_FALSE(TailBound::power_law(1.0, 2.0, 1.0).is_concave());
    CHECK(TailBound::tabulated({{0.0, 0.0}, {0.5, 0.4}, {1.0, 0.6}}).is_concave());
    CHECK_FALSE(TailBound::tabulated({{0.0, 0.0}, {0.5, 0.05}, {1.0, 0.5}}).is_concave());
}

TEST_CASE("scaled bound") {
    const auto tb = TailBound::power_law(0.5, 0.5, 1.0);
    const auto s = tb.scaled(0.25);
    for (double e : {0.0, 0.1, 0.5, 1.0}) CHECK(s.evaluate(e) == doctest::Approx(0.25 * tb.evaluate(e)));
    CHECK(s.eps0() == tb.eps0());
}

TEST_CASE("inverse round trip on random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::vector<TailBound> bounds{
        TailBound::power_law(0.01, 1.0, 1.0),
        TailBound::power_law(0.7, 0.35, 0.8),
        TailBound::power_law(3.0, 2.5, 0.6),
        TailBound::tabulated({{0.0, 0.0}, {0.1, 0.2}, {0.4, 0.3}, {0.9, 0.95}}),
    };
    for (const auto& tb : bounds) {
        for (int i = 0; i < 1000; ++i) {
            const double e = U(rng) * tb.eps0();
            const double back = tb.inverse(tb.evaluate(e));
            CHECK(std::fabs(back - e) <= 1e-9 * std::max(e, 1e-300) + 1e-15);
        }
    }
}

TEST_CASE("strictly increasing on a grid") {
    const auto tab = TailBound::tabulated({{0.0, 0.0}, {0.1, 0.2}, {0.4, 0.3}, {0.9, 0.95}});
    const auto pl = TailBound::power_law(0.7, 0.35, 0.8);
    for (const TailBound* tb : {&tab, &pl}) {
        double prev = -1.0;
        for (int i = 0; i <= 500; ++i) {
            const double v = tb->evaluate(tb->eps0() * i / 500.0);
            CHECK(v > prev);
            prev = v;
        }
    }
}
