#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "pathwise/kernels.hpp"
#include "pathwise/localtime.hpp"

using namespace pathwise;

namespace {

Partition level_partition(const Path& path, int n, double T) {
    return lebesgue_partition(path, Grid::dyadic(n), T);
}

// Crossing counts from the raw samples: list the grid values visited in order
// along each linear segment, then count switches between the cell endpoints.
std::map<std::int64_t, std::pair<int, int>> crossings_by_scan(const Path& path, double s) {
    std::vector<std::int64_t> visits;
    const auto v = path.values();
    auto visit = [&](std::int64_t k) {
        if (visits.empty() || visits.back() != k) visits.push_back(k);
    };
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double a = v[i], b = v[i + 1];
        if (b >= a) {
            for (auto k = static_cast<std::int64_t>(std::ceil(a / s)); k * s <= b; ++k) visit(k);
        } else {
            for (auto k = static_cast<std::int64_t>(std::floor(a / s)); k * s >= b; --k) visit(k);
        }
    }
    std::map<std::int64_t, std::pair<int, int>> out;
    if (visits.empty()) return out;
    const auto [lo, hi] = std::minmax_element(visits.begin(), visits.end());
    for (std::int64_t cell = *lo; cell < *hi; ++cell) {
        std::int64_t last = -1;  // 0: at bottom, 1: at top
        int up = 0, down = 0;
        for (std::int64_t k : visits) {
            if (k != cell && k != cell + 1) continue;
            const std::int64_t where = k - cell;
            if (last == 0 && where == 1) ++up;
            if (last == 1 && where == 0) ++down;
            last = where;
        }
        out[cell] = {up, down};
    }
    return out;
}

}  // namespace

TEST(DiscreteLocalTime, Examples) {
    const Path tent = fixtures::tent();
    EXPECT_DOUBLE_EQ(discrete_local_time(tent, level_partition(tent, 1, 2), 2, 0.25), 0.5);
    EXPECT_DOUBLE_EQ(discrete_local_time(tent, level_partition(tent, 0, 2), 2, 0.5), 1.0);
    const Path c = fixtures::constant(0.4);
    EXPECT_EQ(discrete_local_time(c, level_partition(c, 3, 1), 1, 0.4), 0.0);
}

TEST(TanakaTerm, Examples) {
    const Path tent = fixtures::tent();
    const Partition p = level_partition(tent, 1, 2);
    EXPECT_DOUBLE_EQ(tanaka_term(tent, p, 2, 0.25), 0.5);
    const Path r = fixtures::random_path(4, 100);
    const Partition q = level_partition(r, 3, r.horizon());
    const auto [lo, hi] = r.range(r.horizon());
    for (double t : {0.3 * r.horizon(), r.horizon()}) {
        EXPECT_NEAR(tanaka_term(r, q, t, hi + 1), r.evaluate(t) - r.start_value(), 1e-12);
        EXPECT_EQ(tanaka_term(r, q, t, lo - 1), 0.0);
    }
}

TEST(TanakaResidual, VanishesOnRandomPaths) {
    std::mt19937_64 rng(12);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Path path = fixtures::random_path(seed, 80, 0.5);
        const auto [lo, hi] = path.range(path.horizon());
        std::uniform_real_distribution<double> du(lo - 0.2, hi + 0.2);
        std::uniform_real_distribution<double> dt(0.0, path.horizon());
        for (int n = 0; n <= 6; ++n) {
            const Partition p = level_partition(path, n, path.horizon());
            for (int i = 0; i < 20; ++i) {
                EXPECT_LE(std::abs(tanaka_residual(path, p, dt(rng), du(rng))), 1e-10);
            }
        }
    }
    const Path tent = fixtures::tent();
    EXPECT_EQ(tanaka_residual(tent, level_partition(tent, 1, 2), 2, 0.25), 0.0);
}

TEST(CrossingCounts, TentExamples) {
    const Path tent = fixtures::tent();
    const CrossingTally t0 = crossing_counts(tent, 2, 0);
    EXPECT_EQ(t0.up_at(0), 1);
    EXPECT_EQ(t0.down_at(0), 1);
    const CrossingTally t1 = crossing_counts(tent, 2, 1);
    for (int k : {0, 1}) {
        EXPECT_EQ(t1.up_at(k), 1);
        EXPECT_EQ(t1.down_at(k), 1);
    }
    EXPECT_EQ(t1.up_at(2), 0);
    EXPECT_EQ(t1.max_total(), 2);
    const CrossingTally c = crossing_counts(fixtures::constant(0.0), 1, 5);
    EXPECT_EQ(c.max_total(), 0);
}

TEST(CrossingCounts, MatchSampleScanOracle) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Path path = fixtures::random_path(seed, 120, seed % 2 ? 0.3 : 0.0);
        for (int n = 0; n <= 5; ++n) {
            const double s = std::ldexp(1.0, -n);
            const CrossingTally tally = crossing_counts(path, path.horizon(), n);
            const auto oracle = crossings_by_scan(path, s);
            for (const auto& [cell, counts] : oracle) {
                EXPECT_EQ(tally.up_at(cell), counts.first) << "seed " << seed << " n " << n;
                EXPECT_EQ(tally.down_at(cell), counts.second) << "seed " << seed << " n " << n;
            }
            for (std::size_t i = 0; i < tally.up.size(); ++i) {
                EXPECT_LE(std::abs(tally.up[i] - tally.down[i]), 1);
            }
        }
    }
}

TEST(DowncrossingEstimator, Examples) {
    const Path tent = fixtures::tent();
    EXPECT_DOUBLE_EQ(downcrossing_estimator(tent, 1, 2, 0.5), 0.5);
    EXPECT_THROW(downcrossing_estimator(tent, 1, 2, 0.3), std::invalid_argument);
    EXPECT_EQ(downcrossing_estimator(fixtures::constant(0.0), 3, 1, 0.0), 0.0);
    const Partition p = level_partition(tent, 1, 2);
    for (double u : {0.5, 1.0}) {
        const double gap = discrete_local_time(tent, p, 2, u) - downcrossing_estimator(tent, 1, 2, u);
        EXPECT_GE(gap, 0.0);
        EXPECT_LE(gap, 0.5);
    }
}

TEST(DowncrossingEstimator, SandwichOnRandomPaths) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Path path = fixtures::random_path(seed, 100);
        const auto [lo, hi] = path.range(path.horizon());
        for (int n = 1; n <= 4; ++n) {
            const double s = std::ldexp(1.0, -n);
            for (double t : {0.5 * path.horizon(), path.horizon()}) {
                const Partition p = level_partition(path, n, t);
                for (double u = std::floor(lo / s) * s; u <= hi + s; u += s) {
                    const double gap =
                        discrete_local_time(path, p, t, u) - downcrossing_estimator(path, n, t, u);
                    EXPECT_GE(gap, -1e-12);
                    EXPECT_LE(gap, s + 1e-12);
                }
            }
        }
    }
}

TEST(LocalTimeField, TentLevelOneMatchesPointwise) {
    const Path tent = fixtures::tent();
    const LocalTimeField f = local_time_field(tent, 1, 2);
    ASSERT_EQ(f.rows(), 5u);
    EXPECT_EQ(f.u_grid.front(), -0.5);
    EXPECT_EQ(f.u_grid.back(), 1.5);
    for (std::size_t k = 0; k < f.rows(); ++k) {
        for (std::size_t c = 0; c < f.cols(); ++c) {
            EXPECT_NEAR(f.at(k, c), discrete_local_time(tent, f.partition, f.t_grid()[k], f.u_grid[c]),
                        1e-15);
        }
    }
    for (std::size_t c = 0; c < f.cols(); ++c) EXPECT_EQ(f.at(0, c), 0.0);
}

TEST(LocalTimeField, SupportAndRowMass) {
    const Path path = fixtures::random_path(21, 150);
    const LocalTimeField f = local_time_field(path, 3, path.horizon());
    for (std::size_t k = 0; k < f.rows(); ++k) {
        const auto [lo, hi] = path.range(f.t_grid()[k]);
        double half_sq = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double d = f.partition.values[j + 1] - f.partition.values[j];
            half_sq += 0.5 * d * d;
        }
        for (std::size_t c = 0; c < f.cols(); ++c) {
            EXPECT_GE(f.at(k, c), -1e-15);
            if (f.u_grid[c] < lo || f.u_grid[c] > hi) EXPECT_NEAR(f.at(k, c), 0.0, 1e-12);
        }
        const auto section = local_time_section(path, f.partition, f.t_grid()[k]);
        EXPECT_NEAR(section.integral(), half_sq, 1e-12);
    }
}

TEST(LocalTimeField, ResolutionWarnings) {
    EXPECT_TRUE(local_time_field(brownian_path(1.0, kDefaultBrownianStep, 1), 5, 1.0)
                    .warnings.empty());
    EXPECT_FALSE(local_time_field(brownian_path(1.0, 1.0 / 4096, 1), 6, 1.0).warnings.empty());
}

TEST(UniformDistance, SameFieldIsZero) {
    const Path path = fixtures::random_path(2, 100);
    const LocalTimeField f = local_time_field(path, 3, path.horizon());
    EXPECT_EQ(uniform_distance(f, f), 0.0);
}

TEST(UniformDistance, TentLevelsOneTwoMatchEnumeration) {
    const Path tent = fixtures::tent();
    const Partition p1 = level_partition(tent, 1, 2), p2 = level_partition(tent, 2, 2);
    double sup = 0.0;
    for (double t : p2.times) {
        for (double u = -0.5; u <= 1.5; u += 0.25) {
            sup = std::max(sup, std::abs(discrete_local_time(tent, p1, t, u) -
                                         discrete_local_time(tent, p2, t, u)));
        }
    }
    EXPECT_DOUBLE_EQ(uniform_distance(local_time_field(tent, 1, 2), local_time_field(tent, 2, 2)), sup);
    EXPECT_GT(sup, 0.0);
}

TEST(UniformDistance, MismatchedHorizonsThrow) {
    const Path path = fixtures::random_path(2, 100);
    EXPECT_THROW(uniform_distance(local_time_field(path, 2, 1.0), local_time_field(path, 3, 1.5)),
                 std::invalid_argument);
}

TEST(UniformDistance, BrownianDistancesShrinkInMedian) {
    std::vector<double> d45, d56;
    for (int seed = 0; seed < 20; ++seed) {
        const Path b = brownian_path(1.0, kDefaultBrownianStep, 100 + seed);
        const Partition p4 = level_partition(b, 4, 1), p5 = level_partition(b, 5, 1),
                        p6 = level_partition(b, 6, 1);
        d45.push_back(uniform_distance(p4, p5));
        d56.push_back(uniform_distance(p5, p6));
    }
    EXPECT_LT(fixtures::median(d56), fixtures::median(d45));
}

TEST(ConvergenceStudy, LinearPathDecaysAtSpacingRate) {
    const Path line = fixtures::linear(1.0);
    const ConvergenceReport r = convergence_study(line, 1, 7, 1.0, 0.5);
    ASSERT_EQ(r.distances.size(), 6u);
    for (std::size_t i = 0; i < r.distances.size(); ++i) {
        EXPECT_LE(r.distances[i], std::ldexp(1.0, -r.distance_levels[i]) + 1e-15);
    }
}

TEST(ConvergenceStudy, ConstantPathIsZero) {
    const ConvergenceReport r = convergence_study(fixtures::constant(0.2), 2, 6, 1.0, 0.4, 3.0);
    for (double d : r.distances) EXPECT_EQ(d, 0.0);
    EXPECT_FALSE(r.alpha_hat.has_value());
    EXPECT_EQ(r.c_alpha, 0.0);
    for (double v : r.p_var_profile) EXPECT_EQ(v, 0.0);
}

TEST(ConvergenceStudy, RequiresThreeLevels) {
    EXPECT_THROW(convergence_study(fixtures::tent(), 1, 2, 2.0, 0.4), std::invalid_argument);
}

TEST(ConvergenceStudy, BrownianFitIsPositive) {
    const Path b = brownian_path(1.0, kDefaultBrownianStep, 7);
    const ConvergenceReport r = convergence_study(b, 4, 8, 1.0, 0.4, 3.0);
    ASSERT_TRUE(r.alpha_hat.has_value());
    EXPECT_GT(*r.alpha_hat, 0.0);
    EXPECT_EQ(r.p_var_profile.size(), 5u);
    EXPECT_TRUE(std::isfinite(r.c_alpha));
}

TEST(PVariationProfile, Examples) {
    const LocalTimeField c = local_time_field(fixtures::constant(0.0), 3, 1.0);
    EXPECT_EQ(p_variation_profile(c, 2.0), 0.0);
    const Path tent = fixtures::tent();
    const LocalTimeField f = local_time_field(tent, 1, 2);
    // Rows at t = 1 and t = 1.5 both rise by 1/2 four times.
    EXPECT_DOUBLE_EQ(p_variation_profile(f, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(p_variation_profile(tent, f.partition, 1.0), 2.0);
}

TEST(HolderCoefficient, Examples) {
    EXPECT_EQ(holder_coefficient(local_time_field(fixtures::constant(0.0), 2, 1.0), 0.5), 0.0);
    const Path tent = fixtures::tent();
    const LocalTimeField f = local_time_field(tent, 2, 2);
    double sup = 0.0;
    for (double t : f.t_grid()) {
        for (double u : f.u_grid) {
            for (double v : f.u_grid) {
                if (u >= v) continue;
                const double d = discrete_local_time(tent, f.partition, t, u) -
                                 discrete_local_time(tent, f.partition, t, v);
                sup = std::max(sup, std::abs(d) / std::pow(v - u, 0.5));
            }
        }
    }
    EXPECT_NEAR(holder_coefficient(f, 0.5), sup, 1e-14);
    EXPECT_THROW(holder_coefficient(f, 1.5), std::invalid_argument);
}

TEST(HolderCoefficient, BrownianComparableAcrossLevels) {
    const Path b = brownian_path(1.0, kDefaultBrownianStep, 3);
    const double h4 = holder_coefficient(local_time_field(b, 4, 1.0), 0.4);
    const double h5 = holder_coefficient(local_time_field(b, 5, 1.0), 0.4);
    EXPECT_LE(std::max(h4, h5) / std::min(h4, h5), 4.0);
}

TEST(WeakL2, UnitTestFunctionGivesHalfQuadraticVariation) {
    const Path path = fixtures::random_path(8, 120);
    const double T = path.horizon();
    const std::vector<int> levels{1, 2, 3, 4};
    const auto [lo, hi] = path.range(T);
    const WeakL2Report r =
        weak_l2_check(path, levels, T, {TestFunction::polynomial({1.0}, lo - 1, hi + 1)});
    ASSERT_EQ(r.entries.size(), 4u);
    for (const auto& e : r.entries) {
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const StoppedPath sp =
                stopped_values(path, lebesgue_partition(path, Grid::dyadic(levels[i]), T), e.t);
            double half_sq = 0.0;
            for (std::size_t j = 0; j + 1 < sp.values.size(); ++j) {
                half_sq += 0.5 * (sp.values[j + 1] - sp.values[j]) * (sp.values[j + 1] - sp.values[j]);
            }
            EXPECT_NEAR(e.integrals[i], half_sq, 1e-12);
        }
    }
}

TEST(WeakL2, ConstantPathIsZero) {
    const Path c = fixtures::constant(0.0);
    const WeakL2Report r = weak_l2_check(c, {2, 3, 4}, 1.0, default_test_battery(c, 1.0));
    for (const auto& e : r.entries) {
        for (double v : e.integrals) EXPECT_EQ(v, 0.0);
    }
}

TEST(WeakL2, BrownianIncrementsDecreaseInMedian) {
    std::vector<double> first, last;
    for (int seed = 0; seed < 20; ++seed) {
        const Path b = brownian_path(1.0, kDefaultBrownianStep, 200 + seed);
        const WeakL2Report r =
            weak_l2_check(b, {3, 4, 5, 6, 7}, 1.0, {TestFunction::indicator(0.0, 0.5)});
        const WeakL2Entry& e = r.entries.back();
        first.push_back(e.increments.front());
        last.push_back(e.increments.back());
    }
    EXPECT_LT(fixtures::median(last), fixtures::median(first));
}

TEST(CountDiffering, Examples) {
    EXPECT_EQ(count_differing(fixtures::constant(0.0), 2, 0.25, 1.0), 0);
    EXPECT_EQ(count_differing(fixtures::tent(), 1, 0.5, 2.0), 1);
    EXPECT_THROW(count_differing(fixtures::tent(), 1, 0.3, 2.0), std::invalid_argument);
}

TEST(CountDiffering, ProofBoundOnRandomPaths) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Path path = fixtures::random_path(seed, 150);
        const auto [lo, hi] = path.range(path.horizon());
        for (int n = 1; n <= 5; ++n) {
            const double s = std::ldexp(1.0, -n);
            const CrossingTally tally = crossing_counts(path, path.horizon(), n);
            for (double u = std::floor(lo / s) * s; u <= hi + s; u += s) {
                const std::int64_t k = std::llround(u / s);
                const std::int64_t N = count_differing(path, n, u, path.horizon());
                EXPECT_LE(N, tally.up_at(k - 1) + tally.down_at(k) + 2);
            }
        }
    }
}
