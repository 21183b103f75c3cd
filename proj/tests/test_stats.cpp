#include <doctest.h>

#include <cmath>
#include <numeric>

#include "atrace/stats.hpp"

using namespace atrace;

TEST_CASE("fractions partition all packets") {
    for (double q : {0.04, 0.2, 0.7}) {
        const MarkingStats s = fractions(MarkingConfig::uniform(q), 12);
        const double total = std::accumulate(s.f.begin(), s.f.end(), 0.0);
        CHECK(total == doctest::Approx(1.0));
    }
}

TEST_CASE("uniform closed forms") {
    const std::size_t d = 20;
    const double q = 0.04;
    const MarkingStats s = fractions(MarkingConfig::uniform(q), d);
    CHECK(s.f0() == doctest::Approx(std::pow(1 - q, d)));
    CHECK(s.f1() == doctest::Approx(q * std::pow(1 - q, d - 1)));

    // (1 - f_0)/f_1 equals the geometric sum of (1-q)^{-i}
    double sum = 0;
    for (std::size_t i = 0; i < d; ++i) sum += std::pow(1 - q, -static_cast<double>(i));
    CHECK(s.ratio() == doctest::Approx(sum));
}

TEST_CASE("vanishing q drives the ratio to d") {
    const MarkingStats s = fractions(MarkingConfig::uniform(1e-9), 30);
    CHECK(s.ratio() == doctest::Approx(30.0).epsilon(1e-6));
}

TEST_CASE("cutoff scheme freezes once the path outgrows the cutoff") {
    const auto config = MarkingConfig::cutoff(0.2, 5);
    const MarkingStats at5 = fractions(config, 5);
    CHECK(at5.f0() == doctest::Approx(std::pow(0.8, 5)));
    for (std::size_t d : {6u, 10u, 40u}) {
        const MarkingStats s = fractions(config, d);
        CHECK(s.f0() == doctest::Approx(at5.f0()));
        CHECK(s.ratio() == doctest::Approx(at5.ratio()));
    }
}

TEST_CASE("worst case scans the three neighboring length hypotheses") {
    const auto config = MarkingConfig::uniform(0.2);
    const std::size_t d = 10;
    const WorstCase w = worst_case_ratio(config, d);
    // the uniform ratio grows with d, so d+1 wins
    CHECK(w.d_arg == d + 1);
    CHECK(w.ratio() == doctest::Approx(fractions(config, d + 1).ratio()));
    CHECK(w.ratio() > fractions(config, d).ratio());
}

TEST_CASE("cutoff worst case is constant above the cutoff") {
    const auto config = MarkingConfig::cutoff(0.2, 5);
    const double at6 = worst_case_ratio(config, 6).ratio();
    for (std::size_t d : {7u, 12u, 100u})
        CHECK(worst_case_ratio(config, d).ratio() == doctest::Approx(at6));
}

TEST_CASE("geometric closed-form constant") {
    CHECK(geometric_ratio_approx(0.5) == doctest::Approx(15.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("degenerate schemes are rejected") {
    // q = 0 everywhere: nothing is ever marked
    CHECK_THROWS_AS(fractions(MarkingConfig::uniform(0.0), 5).ratio(), DegenerateScheme);
    CHECK_THROWS_AS(worst_case_ratio(MarkingConfig::uniform(0.0), 5), DegenerateScheme);
}

TEST_CASE("average marked packets for a full trace") {
    const MarkingStats s = fractions(MarkingConfig::uniform(0.04), 25);
    CHECK(avg_marked_for_full_trace(s, 25) == 25.0 * std::ceil(s.ratio()));
}

TEST_CASE("per-node overrides replace the scheme formula") {
    MarkingConfig config = MarkingConfig::uniform(0.5);
    config.per_node = {1.0, 0.0, 0.0};
    const MarkingStats s = fractions(config, 3);
    CHECK(s.f0() == doctest::Approx(0.0));
    CHECK(s.f1() == doctest::Approx(1.0));
}
