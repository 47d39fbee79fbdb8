#include "pathwise/audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pathwise/kernels.hpp"
#include "pathwise/localtime.hpp"
#include "pathwise/partition.hpp"

namespace pathwise {

namespace {

// Lowest value of w + position * (S(s) - v) over sample times strictly inside (a, b).
double interior_min(const Path& path, double a, double b, double w, double position, double v) {
    if (position == 0.0 || !(b > a)) return w;
    const auto times = path.times();
    const auto values = path.values();
    double lowest = w;
    for (std::size_t i = path.segment_index(a) + 1; i < times.size() && times[i] < b; ++i) {
        if (times[i] <= a) continue;
        lowest = std::min(lowest, w + position * (values[i] - v));
    }
    return lowest;
}

}  // namespace

Execution execute(const SimpleStrategy& strategy, const Path& path, double t) {
    if (!(t >= 0.0) || t > path.horizon()) {
        throw PathError(PathError::Code::kOutOfDomain, "execute: t outside the path domain");
    }
    Execution ex;
    double w = strategy.initial_capital;
    double position = 0.0;
    double t_prev = 0.0;
    double v_prev = path.start_value();
    ex.min_wealth = w;

    for (const StrategyEvent& event : strategy.events) {
        double tau = t_prev;
        double value = v_prev;
        bool by_terminate = false;
        if (!event.trigger_levels.empty()) {
            const auto hit = first_hit(path, t_prev, event.trigger_levels);
            if (!hit || hit->time > t) break;
            tau = hit->time;
            value = hit->level;
            by_terminate = strategy.terminate_level && hit->level == *strategy.terminate_level;
        }
        ex.min_wealth = std::min(ex.min_wealth, interior_min(path, t_prev, tau, w, position, v_prev));
        w += position * (value - v_prev);
        ex.min_wealth = std::min(ex.min_wealth, w);

        position = event.sizing == StrategyEvent::Sizing::kFixed ? event.size : event.size * w;
        if (by_terminate) position = 0.0;
        ex.times.push_back(tau);
        ex.wealth.push_back(w);
        ex.positions.push_back(position);
        t_prev = tau;
        v_prev = value;
        if (by_terminate) {
            ex.terminated = true;
            break;
        }
    }
    const double v_end = path.evaluate(t);
    ex.min_wealth = std::min(ex.min_wealth, interior_min(path, t_prev, t, w, position, v_prev));
    w += position * (v_end - v_prev);
    ex.min_wealth = std::min(ex.min_wealth, w);
    ex.final_wealth = w;
    if (strategy.admissibility_lambda) {
        ex.admissible = ex.min_wealth - strategy.initial_capital >=
                        -*strategy.admissibility_lambda - 1e-12;
    }
    return ex;
}

double wealth(const SimpleStrategy& strategy, const Path& path, double t) {
    return execute(strategy, path, t).final_wealth;
}

SimpleStrategy upcrossing_strategy(double u, int level, double K,
                                   std::optional<std::int64_t> max_rounds) {
    if (!(K > 0.0)) throw std::invalid_argument("upcrossing_strategy: K must be > 0");
    const double s = std::ldexp(1.0, -level);
    const std::int64_t rounds =
        max_rounds.value_or(static_cast<std::int64_t>(level) * level * (std::int64_t{1} << level));
    SimpleStrategy strategy;
    strategy.initial_capital = 1.0;
    strategy.terminate_level = -K;
    strategy.admissibility_lambda = 1.0;
    strategy.events.reserve(static_cast<std::size_t>(2 * std::max<std::int64_t>(rounds, 0)));
    for (std::int64_t r = 0; r < rounds; ++r) {
        strategy.events.push_back(
            {{u}, StrategyEvent::Sizing::kWealthFraction, 1.0 / (2.0 * K)});
        strategy.events.push_back({{u + s, -K}, StrategyEvent::Sizing::kFixed, 0.0});
    }
    return strategy;
}

AuditReport crossing_bound_report(const Path& path, double T, const std::vector<int>& levels,
                                  double alpha) {
    for (int n : levels) {
        if (n < 1) throw std::invalid_argument("crossing_bound_report: levels must be >= 1");
    }
    AuditReport report;
    report.levels = levels;
    report.alpha = alpha;
    const auto count = static_cast<std::ptrdiff_t>(levels.size());
    report.max_crossings.assign(levels.size(), 0);
    report.crossing_constants.assign(levels.size(), 0.0);
    std::vector<Partition> parts(levels.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const int n = levels[k];
        parts[k] = lebesgue_partition(path, Grid::dyadic(n), T);
        report.max_crossings[k] = crossing_counts(path, T, n).max_total();
        report.crossing_constants[k] = static_cast<double>(report.max_crossings[k]) /
                                       (static_cast<double>(n) * n * std::ldexp(1.0, n));
    }
    for (double c : report.crossing_constants) report.c_T = std::max(report.c_T, c);
    if (!levels.empty()) {
        report.atypical = report.crossing_constants.back() > report.crossing_constants.front();
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        const double d = kernels::uniform_distance(parts[k - 1], parts[k]);
        report.deviation_events.push_back(d >= std::pow(2.0, -levels[k] * alpha));
    }
    if (!levels.empty()) {
        const int top = *std::max_element(levels.begin(), levels.end());
        const double s = std::ldexp(1.0, -top);
        const auto [lo, hi] = path.range(T);
        const double K = 1.0 + std::max(std::abs(lo), std::abs(hi));
        const double u = static_cast<double>(std::llround(path.start_value() / s)) * s;
        const Execution ex = execute(upcrossing_strategy(u, top, K), path, T);
        report.strategy_times = ex.times;
        report.strategy_wealth = ex.wealth;
        report.strategy_times.push_back(T);
        report.strategy_wealth.push_back(ex.final_wealth);
    }
    return report;
}

DeviationSample deviation_sample(const Path& path, int level, double alpha, double K, double T) {
    DeviationSample sample;
    const auto [lo, hi] = path.range(T);
    bool in_set = std::max(std::abs(lo), std::abs(hi)) < K;
    for (int m = 1; m <= level && in_set; ++m) {
        const double allowed = K * m * m * std::ldexp(1.0, m);
        in_set = static_cast<double>(crossing_counts(path, T, m).max_total()) <= allowed;
    }
    sample.in_A_K = in_set;
    sample.distance =
        kernels::uniform_distance(lebesgue_partition(path, Grid::dyadic(level - 1), T),
                                  lebesgue_partition(path, Grid::dyadic(level), T));
    sample.event = sample.distance >= std::pow(2.0, -level * alpha);
    return sample;
}

DeviationReport deviation_frequency(const DeviationConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 0.5)) {
        throw std::invalid_argument("deviation_frequency: alpha must lie in (0, 1/2)");
    }
    if (config.level < 2) throw std::invalid_argument("deviation_frequency: level must be >= 2");
    if (config.seeds < 1) throw std::invalid_argument("deviation_frequency: seeds must be >= 1");
    DeviationReport report;
    report.config = config;
    report.samples.resize(static_cast<std::size_t>(config.seeds));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < config.seeds; ++i) {
        const std::uint64_t seed = config.first_seed + static_cast<std::uint64_t>(i);
        const Path path = brownian_path(config.T, config.dt, seed);
        DeviationSample sample =
            deviation_sample(path, config.level, config.alpha, config.K, config.T);
        sample.seed = seed;
        report.samples[static_cast<std::size_t>(i)] = sample;
    }
    for (const auto& sample : report.samples) {
        if (!sample.in_A_K) continue;
        ++report.in_A_K;
        if (sample.event) ++report.events;
    }
    if (report.in_A_K > 0) {
        const double f = static_cast<double>(report.events) / report.in_A_K;
        report.empirical_freq = f;
        report.standard_error = std::sqrt(f * (1.0 - f) / report.in_A_K);
    }
    const double n = config.level;
    report.threshold = std::pow(2.0, -n * config.alpha);
    const double exponent = -std::pow(2.0, n * (0.5 - config.alpha)) + 16.0 * config.K * n * n;
    report.log_bound_per_u = std::log(2.0) + exponent;
    report.log_paper_bound = exponent + (n + 2.0) * std::log(2.0) + std::log(config.K);
    report.paper_bound = std::exp(report.log_paper_bound);
    report.vacuous = report.log_paper_bound >= 0.0;
    report.within_bound = report.empirical_freq <=
                          std::min(1.0, report.paper_bound) + 2.0 * report.standard_error;
    return report;
}

}  // namespace pathwise
