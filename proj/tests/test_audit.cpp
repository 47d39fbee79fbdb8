#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "pathwise/audit.hpp"

using namespace pathwise;

namespace {

StrategyEvent fixed(std::vector<double> levels, double size) {
    return StrategyEvent{std::move(levels), StrategyEvent::Sizing::kFixed, size};
}

// Reflected random walk kept inside [-bound, bound].
Path bounded_path(std::uint64_t seed, int points, double bound) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, 0.15);
    std::vector<double> t{0.0}, v{0.0};
    for (int i = 1; i < points; ++i) {
        double x = v.back() + step(rng);
        if (x > bound) x = 2 * bound - x;
        if (x < -bound) x = -2 * bound - x;
        t.push_back(i);
        v.push_back(std::clamp(x, -bound, bound));
    }
    return make_path(std::move(t), std::move(v));
}

}  // namespace

// ---------------------------------------------------------------- wealth

TEST(Wealth, BuyAndHold) {
    SimpleStrategy s;
    s.events = {fixed({}, 1.0)};
    const Path path = fixtures::random_path(3, 50, 0.5);
    for (double t : {0.0, 0.3, path.horizon()}) {
        EXPECT_NEAR(wealth(s, path, t), path.evaluate(t) - path.start_value(), 1e-14);
    }
}

TEST(Wealth, EnterAtHalfOnTent) {
    SimpleStrategy s;
    s.events = {fixed({0.5}, 1.0)};
    EXPECT_DOUBLE_EQ(wealth(s, fixtures::tent(), 2.0), -0.5);
    const Execution e = execute(s, fixtures::tent(), 2.0);
    ASSERT_EQ(e.times.size(), 1u);
    EXPECT_DOUBLE_EQ(e.times[0], 0.5);
    EXPECT_DOUBLE_EQ(e.min_wealth, -0.5);
}

TEST(Wealth, EmptyStrategyIsZero) {
    EXPECT_EQ(wealth(SimpleStrategy{}, fixtures::tent(), 2.0), 0.0);
    SimpleStrategy funded;
    funded.initial_capital = 3.0;
    EXPECT_EQ(wealth(funded, fixtures::tent(), 2.0), 3.0);
}

TEST(Wealth, UnresolvedEventLeavesPositionOpen) {
    SimpleStrategy s;
    s.events = {fixed({0.25}, 2.0), fixed({5.0}, 0.0)};
    // The exit never fires, so the position is carried to t.
    EXPECT_DOUBLE_EQ(wealth(s, fixtures::tent(), 2.0), 2.0 * (0.0 - 0.25));
}

TEST(Wealth, LinearInPositions) {
    const Path path = fixtures::random_path(9, 200, 0.2);
    SimpleStrategy s;
    s.events = {fixed({0.25, -0.25}, 1.5), fixed({0.5, -0.5}, -2.0), fixed({0.0}, 0.75)};
    const double base = wealth(s, path, path.horizon());
    for (double c : {-3.0, 0.5, 7.0}) {
        SimpleStrategy scaled = s;
        for (auto& e : scaled.events) e.size *= c;
        EXPECT_NEAR(wealth(scaled, path, path.horizon()), c * base, 1e-12);
    }
}

// ---------------------------------------------------------------- upcrossing strategy

TEST(UpcrossingStrategy, ZigZagCompounds) {
    // Two upcrossings of [0, 1/2] with K = 1, n = 1: (1 + 1/4)^2.
    const Path zz = fixtures::zigzag(0.0, 0.5, 4);
    const auto s = upcrossing_strategy(0.0, 1, 1.0);
    EXPECT_DOUBLE_EQ(wealth(s, zz, zz.horizon()), 25.0 / 16);
}

TEST(UpcrossingStrategy, CompoundingIsExact) {
    for (int n = 1; n <= 4; ++n) {
        for (double K : {1.0, 2.0, 4.0}) {
            for (int m = 1; m <= 12; ++m) {
                const double h = std::ldexp(1.0, -n);
                const Path zz = fixtures::zigzag(0.0, h, 2 * m);
                const auto s = upcrossing_strategy(0.0, n, K, m);
                EXPECT_NEAR(wealth(s, zz, zz.horizon()), std::pow(1.0 + h / (2 * K), m), 1e-12);
            }
        }
    }
}

TEST(UpcrossingStrategy, RoundLimitStopsTrading) {
    const Path zz = fixtures::zigzag(0.0, 0.5, 20);
    const auto s = upcrossing_strategy(0.0, 1, 1.0, 3);
    EXPECT_DOUBLE_EQ(wealth(s, zz, zz.horizon()), std::pow(1.25, 3));
    // Default cap n^2 2^n = 2 at n = 1.
    EXPECT_DOUBLE_EQ(wealth(upcrossing_strategy(0.0, 1, 1.0), zz, zz.horizon()), 1.25 * 1.25);
}

TEST(UpcrossingStrategy, NeverReachingULeavesCapital) {
    const Path path = make_path({0.0, 1.0, 2.0}, {0.0, -0.3, 0.1});
    const auto s = upcrossing_strategy(0.5, 2, 1.0);
    const Execution e = execute(s, path, 2.0);
    EXPECT_EQ(e.final_wealth, 1.0);
    EXPECT_TRUE(e.times.empty());
}

TEST(UpcrossingStrategy, StopLossClosesForGood) {
    const Path path = make_path({0.0, 1.0, 2.0, 3.0}, {0.0, -1.0, 1.0, -0.5});
    const auto s = upcrossing_strategy(0.0, 1, 1.0);
    const Execution e = execute(s, path, 3.0);
    EXPECT_TRUE(e.terminated);
    EXPECT_EQ(e.positions.back(), 0.0);
    EXPECT_DOUBLE_EQ(e.final_wealth, 0.5);
    EXPECT_DOUBLE_EQ(e.min_wealth, 0.5);
}

TEST(UpcrossingStrategy, AdmissibleOnBoundedPaths) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Path path = bounded_path(seed, 200, 1.0);
        const int n = 1 + static_cast<int>(seed % 4);
        const double u = std::ldexp(static_cast<double>(static_cast<int>(seed % 5) - 2), -2);
        const Execution e = execute(upcrossing_strategy(u, n, 1.0), path, path.horizon());
        ASSERT_GE(e.min_wealth, -1e-12) << "seed " << seed;
        ASSERT_TRUE(e.admissible) << "seed " << seed;
    }
}

// ---------------------------------------------------------------- crossing bound report

TEST(CrossingBoundReport, ConstantPathIsZero) {
    const auto r = crossing_bound_report(fixtures::constant(0.3), 1.0, {1, 2, 3, 4});
    for (double c : r.crossing_constants) EXPECT_EQ(c, 0.0);
    EXPECT_EQ(r.c_T, 0.0);
    EXPECT_FALSE(r.atypical);
}

TEST(CrossingBoundReport, TentByEnumeration) {
    const std::vector<int> levels{1, 2, 3, 4, 5, 6};
    const auto r = crossing_bound_report(fixtures::tent(), 2.0, levels);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const int n = levels[i];
        EXPECT_EQ(r.max_crossings[i], 2);
        EXPECT_DOUBLE_EQ(r.crossing_constants[i], 2.0 / (n * n * std::ldexp(1.0, n)));
    }
    EXPECT_DOUBLE_EQ(r.c_T, r.crossing_constants.front());
    EXPECT_FALSE(r.atypical);
    EXPECT_EQ(r.deviation_events.size(), levels.size() - 1);
}

TEST(CrossingBoundReport, MonotonePath) {
    const auto r = crossing_bound_report(fixtures::linear(1.0), 1.0, {1, 2, 3});
    for (std::size_t i = 0; i < 3; ++i) {
        const int n = r.levels[i];
        EXPECT_EQ(r.max_crossings[i], 1);
        EXPECT_DOUBLE_EQ(r.crossing_constants[i], 1.0 / (n * n * std::ldexp(1.0, n)));
    }
}

TEST(CrossingBoundReport, BrownianConstantsStayBounded) {
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = crossing_bound_report(brownian_path(1.0, std::ldexp(1.0, -20), seed), 1.0,
                                             {3, 4, 5, 6, 7});
        const auto [lo, hi] = std::minmax_element(r.crossing_constants.begin(),
                                                  r.crossing_constants.end());
        ratios.push_back(*hi / *lo);
        EXPECT_FALSE(r.strategy_wealth.empty());
    }
    EXPECT_LE(fixtures::median(ratios), 10.0);
}

TEST(CrossingBoundReport, RejectsLevelZero) {
    EXPECT_THROW(crossing_bound_report(fixtures::tent(), 2.0, {0, 1}), std::invalid_argument);
}

// ---------------------------------------------------------------- deviation frequency

TEST(Deviation, ConstantPathNeverDeviates) {
    for (int n = 2; n <= 8; ++n) {
        const DeviationSample s = deviation_sample(fixtures::constant(0.0), n, 0.25, 4.0, 1.0);
        EXPECT_EQ(s.distance, 0.0);
        EXPECT_FALSE(s.event);
        EXPECT_TRUE(s.in_A_K);
    }
}

TEST(Deviation, UnboundedPathLeavesAK) {
    const DeviationSample s = deviation_sample(fixtures::linear(5.0), 3, 0.25, 4.0, 5.0);
    EXPECT_FALSE(s.in_A_K);
}

TEST(Deviation, SmallLevelIsVacuous) {
    DeviationConfig config;
    config.seeds = 4;
    config.level = 2;
    config.dt = std::ldexp(1.0, -14);
    const DeviationReport r = deviation_frequency(config);
    EXPECT_TRUE(r.vacuous);
    EXPECT_GE(r.paper_bound, 1.0);
    EXPECT_EQ(r.samples.size(), 4u);
    const double n = 2, K = 4, alpha = 0.25;
    EXPECT_NEAR(r.log_bound_per_u, std::log(2.0) - std::pow(2.0, n * (0.5 - alpha)) + 16 * K * n * n,
                1e-12);
    EXPECT_DOUBLE_EQ(r.threshold, std::pow(2.0, -n * alpha));
    EXPECT_TRUE(r.within_bound);
}

TEST(Deviation, ReproducibleAcrossRuns) {
    DeviationConfig config;
    config.seeds = 6;
    config.level = 4;
    config.dt = std::ldexp(1.0, -14);
    const DeviationReport a = deviation_frequency(config);
    const DeviationReport b = deviation_frequency(config);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].seed, b.samples[i].seed);
        EXPECT_EQ(a.samples[i].distance, b.samples[i].distance);
    }
    EXPECT_EQ(a.empirical_freq, b.empirical_freq);
}
