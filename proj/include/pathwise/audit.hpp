#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pathwise/path.hpp"

namespace pathwise {

/**
 * One position change of a simple strategy. The event fires at the first time,
 * at or after the previous event, at which the path equals one of
 * `trigger_levels`; an empty list fires immediately. From then on the
 * strategy holds `size` shares, or `size` times the current wealth when the
 * sizing is kWealthFraction.
 */
struct StrategyEvent {
    enum class Sizing { kFixed, kWealthFraction };
    std::vector<double> trigger_levels;
    Sizing sizing = Sizing::kFixed;
    double size = 0.0;
};

struct SimpleStrategy {
    std::vector<StrategyEvent> events;
    double initial_capital = 0.0;
    /// An event fired by hitting this level closes the position and ends trading.
    std::optional<double> terminate_level;
    /// When set, evaluation checks (H.S) >= -lambda along the path.
    std::optional<double> admissibility_lambda;
};

/// Resolved trading record along one path on [0, t].
struct Execution {
    std::vector<double> times;      ///< event times
    std::vector<double> positions;  ///< shares held from each event time
    std::vector<double> wealth;     ///< wealth at each event time, before trading
    double final_wealth = 0.0;      ///< initial capital + (H.S)_t
    double min_wealth = 0.0;        ///< inf over [0, t] of initial capital + (H.S)
    bool terminated = false;
    bool admissible = true;  ///< (H.S) >= -lambda on [0, t]; true when lambda is unset
};

Execution execute(const SimpleStrategy& strategy, const Path& path, double t);

/// initial capital + (H.S)_t.
double wealth(const SimpleStrategy& strategy, const Path& path, double t);

/// Compounding strategy of the upcrossing lemma: starting from capital 1, buy
/// wealth/(2K) shares at each hit of u, sell at the next hit of u + 2^-n, and
/// stop for good if -K is hit while holding. max_rounds defaults to n^2 2^n.
SimpleStrategy upcrossing_strategy(double u, int level, double K,
                                   std::optional<std::int64_t> max_rounds = std::nullopt);

struct AuditReport {
    std::vector<int> levels;
    std::vector<std::int64_t> max_crossings;  ///< max_k (U + D) per level
    std::vector<double> crossing_constants;   ///< C_n = max_k (U + D) / (n^2 2^n)
    double c_T = 0.0;
    bool atypical = false;  ///< C_n at the top level exceeds C_n at the lowest level
    /// Wealth at the event times of the upcrossing strategy at u = S_0 rounded
    /// to the top level, with K = 1 + sup |S|.
    std::vector<double> strategy_times;
    std::vector<double> strategy_wealth;
    /// For consecutive levels (n-1, n): sup |I^n - I^(n-1)| >= 2^{-n alpha}.
    std::vector<bool> deviation_events;
    double alpha = 0.25;
};

/// Levels must be >= 1.
AuditReport crossing_bound_report(const Path& path, double T, const std::vector<int>& levels,
                                  double alpha = 0.25);

struct DeviationConfig {
    int seeds = 50;
    std::uint64_t first_seed = 1;
    int level = 8;
    double alpha = 0.25;
    double K = 4.0;
    double T = 1.0;
    double dt = kDefaultBrownianStep;
};

struct DeviationSample {
    std::uint64_t seed = 0;
    bool in_A_K = false;
    double distance = 0.0;  ///< sup over (t, u) of |I^n - I^(n-1)|
    bool event = false;     ///< distance >= 2^{-n alpha}
};

struct DeviationReport {
    DeviationConfig config;
    std::vector<DeviationSample> samples;
    int in_A_K = 0;
    int events = 0;
    double empirical_freq = 0.0;
    double standard_error = 0.0;
    double threshold = 0.0;  ///< 2^{-n alpha}
    /// log of 2 exp(-2^{n(1/2 - alpha)} + 16 K n^2), the bound at a single u.
    double log_bound_per_u = 0.0;
    /// log of the bound after a union over the 2K 2^n grid values of u in (-K, K).
    double log_paper_bound = 0.0;
    double paper_bound = 0.0;  ///< exp(log_paper_bound); may be +inf
    bool vacuous = false;      ///< paper_bound >= 1
    bool within_bound = false;  ///< empirical_freq <= min(1, paper_bound) + 2 standard errors
};

/// Deviation statistics for a single path; used by the Monte Carlo sweep.
DeviationSample deviation_sample(const Path& path, int level, double alpha, double K, double T);

/// Monte Carlo over Brownian paths, parallel over seeds.
DeviationReport deviation_frequency(const DeviationConfig& config);

}  // namespace pathwise
