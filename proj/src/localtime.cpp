#include "pathwise/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "pathwise/kernels.hpp"
#include "pathwise/pvariation.hpp"
#include "pathwise/summation.hpp"

namespace pathwise {

namespace {

bool on_grid(double v, double spacing) {
    return static_cast<double>(std::llround(v / spacing)) * spacing == v;
}

double negative_part(double x) { return std::max(0.0, -x); }

std::vector<double> stopped(const Path& path, const Partition& partition, double t) {
    return stopped_values(path, partition, t).values;
}

}  // namespace

double discrete_local_time(const Path& path, const Partition& partition, double t, double u) {
    const std::vector<double> x = stopped(path, partition, t);
    CompensatedSum sum;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        if (HalfOpenInterval{x[j], x[j + 1]}.contains(u)) sum += std::abs(x[j + 1] - u);
    }
    return sum.value();
}

double tanaka_term(const Path& path, const Partition& partition, double t, double u) {
    const std::vector<double> x = stopped(path, partition, t);
    CompensatedSum sum;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        if (x[j] < u) sum += x[j + 1] - x[j];
    }
    return sum.value();
}

double tanaka_residual(const Path& path, const Partition& partition, double t, double u) {
    const double local = discrete_local_time(path, partition, t, u);
    const double rhs = negative_part(path.evaluate(t) - u) -
                       negative_part(path.start_value() - u) +
                       tanaka_term(path, partition, t, u);
    return local - rhs;
}

LocalTimeSection local_time_section(const Path& path, const Partition& partition, double t) {
    return LocalTimeSection::from_stopped(stopped(path, partition, t));
}

std::int64_t CrossingTally::up_at(std::int64_t k) const {
    const std::int64_t i = k - k_min;
    if (i < 0 || i >= static_cast<std::int64_t>(up.size())) return 0;
    return up[static_cast<std::size_t>(i)];
}

std::int64_t CrossingTally::down_at(std::int64_t k) const {
    const std::int64_t i = k - k_min;
    if (i < 0 || i >= static_cast<std::int64_t>(down.size())) return 0;
    return down[static_cast<std::size_t>(i)];
}

std::int64_t CrossingTally::max_total() const {
    std::int64_t best = 0;
    for (std::size_t i = 0; i < up.size(); ++i) best = std::max(best, up[i] + down[i]);
    return best;
}

CrossingTally crossing_counts(const Path& path, double T, int level) {
    CrossingTally tally = crossing_counts(path, T, Grid::dyadic(level));
    tally.level = level;
    return tally;
}

CrossingTally crossing_counts(const Path& path, double T, const Grid& grid) {
    CrossingTally tally;
    tally.level = grid.level.value_or(0);
    tally.spacing = grid.spacing;
    const Partition part = lebesgue_partition(path, grid, T);
    const double s = grid.spacing;

    // Consecutive grid hits are adjacent grid values, so a completed traversal
    // of a cell is exactly one leg between two genuine hits.
    const std::size_t first = part.start_on_grid ? 0 : 1;
    const std::size_t last = part.end_is_hit ? part.size() - 1 : part.size() - 2;
    std::vector<std::pair<std::int64_t, bool>> legs;  // (cell index, upward)
    std::int64_t k_lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t k_hi = std::numeric_limits<std::int64_t>::min();
    for (std::size_t j = first; j < last && last < part.size(); ++j) {
        const std::int64_t a = std::llround(part.values[j] / s);
        const std::int64_t b = std::llround(part.values[j + 1] / s);
        const std::int64_t cell = std::min(a, b);
        legs.emplace_back(cell, b > a);
        k_lo = std::min(k_lo, cell);
        k_hi = std::max(k_hi, cell);
    }
    if (legs.empty()) return tally;
    tally.k_min = k_lo;
    tally.up.assign(static_cast<std::size_t>(k_hi - k_lo + 1), 0);
    tally.down.assign(tally.up.size(), 0);
    for (const auto& [cell, upward] : legs) {
        auto& counts = upward ? tally.up : tally.down;
        ++counts[static_cast<std::size_t>(cell - k_lo)];
    }
    return tally;
}

double downcrossing_estimator(const Path& path, int level, double t, double u) {
    const double s = std::ldexp(1.0, -level);
    if (!on_grid(u, s)) {
        throw std::invalid_argument("downcrossing_estimator: u is not a multiple of 2^-n");
    }
    if (t == 0.0) return 0.0;
    const CrossingTally tally = crossing_counts(path, t, level);
    return s * static_cast<double>(tally.down_at(std::llround(u / s) - 1));
}

std::vector<std::string> resolution_warnings(const Path& path, const Partition& partition,
                                             int level) {
    std::vector<std::string> out;
    const std::size_t hits = partition.hit_count();
    if (10 * hits > path.size()) {
        out.push_back("level " + std::to_string(level) + ": " + std::to_string(hits) +
                      " stopping times against " + std::to_string(path.size()) +
                      " samples; crossings of the interpolant under-resolve the path");
    }
    // The sampling-step rule only applies to rough paths, recognised by a
    // sampled quadratic variation far above that of a smooth curve.
    const auto times = path.times();
    const auto values = path.values();
    const double T = partition.truncation_time;
    double max_step = 0.0;
    double qv = 0.0;
    for (std::size_t i = 1; i < times.size() && times[i - 1] < T; ++i) {
        max_step = std::max(max_step, times[i] - times[i - 1]);
        qv += (values[i] - values[i - 1]) * (values[i] - values[i - 1]);
    }
    const bool rough = times.size() >= 64 && qv > 100.0 * max_step * T;
    const double limit = std::ldexp(1.0, -2 * level - 2);
    if (rough && max_step > limit) {
        out.push_back("level " + std::to_string(level) + ": sampling step " +
                      std::to_string(max_step) + " exceeds 2^-(2n+2) = " +
                      std::to_string(limit));
    }
    return out;
}

LocalTimeField local_time_field(const Path& path, int level, double T) {
    LocalTimeField field;
    field.level = level;
    field.T = T;
    field.partition = lebesgue_partition(path, Grid::dyadic(level), T);
    const double s = field.partition.spacing;
    const auto [lo, hi] = path.range(T);
    field.u_index_min = static_cast<std::int64_t>(std::floor(lo / s)) - 1;
    const std::int64_t i_max = static_cast<std::int64_t>(std::ceil(hi / s)) + 1;
    for (std::int64_t i = field.u_index_min; i <= i_max; ++i) {
        field.u_grid.push_back(static_cast<double>(i) * s);
    }
    kernels::field_values(field.partition.values, field.u_grid, field.values,
                          field.right_limits);
    field.warnings = resolution_warnings(path, field.partition, level);
    return field;
}

double uniform_distance(const LocalTimeField& coarse, const LocalTimeField& fine) {
    if (coarse.T != fine.T) {
        throw std::invalid_argument("uniform_distance: fields have different horizons");
    }
    return uniform_distance(coarse.partition, fine.partition);
}

double uniform_distance(const Partition& coarse, const Partition& fine) {
    return kernels::uniform_distance(coarse, fine);
}

ConvergenceReport convergence_study(const Path& path, int n_min, int n_max, double T,
                                    double alpha, std::optional<double> p) {
    if (n_max - n_min + 1 < 3) {
        throw std::invalid_argument("convergence_study: at least three levels are required");
    }
    ConvergenceReport report;
    report.alpha = alpha;
    report.p = p;
    const int count = n_max - n_min + 1;
    for (int n = n_min; n <= n_max; ++n) report.levels.push_back(n);

    std::vector<Partition> parts(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        parts[static_cast<std::size_t>(i)] =
            lebesgue_partition(path, Grid::dyadic(n_min + i), T);
    }

    report.distances.assign(static_cast<std::size_t>(count - 1), 0.0);
    if (p) report.p_var_profile.assign(static_cast<std::size_t>(count), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (i > 0) report.distances[k - 1] = kernels::uniform_distance(parts[k - 1], parts[k]);
        if (p) report.p_var_profile[k] = kernels::p_variation_profile(parts[k], *p);
    }

    for (int i = 0; i < count; ++i) {
        for (auto& w : resolution_warnings(path, parts[static_cast<std::size_t>(i)], n_min + i)) {
            report.warnings.push_back(std::move(w));
        }
    }

    std::vector<double> xs, ys;
    for (int i = 1; i < count; ++i) {
        const int n = n_min + i;
        const double d = report.distances[static_cast<std::size_t>(i - 1)];
        report.distance_levels.push_back(n);
        report.c_alpha = std::max(report.c_alpha, std::pow(2.0, n * alpha) * d);
        if (d >= 1e-12) {
            xs.push_back(n);
            ys.push_back(std::log2(d));
        }
    }
    if (xs.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        report.alpha_hat = -sxy / sxx;
    }
    return report;
}

double p_variation_profile(const LocalTimeField& field, double p) {
    double sup = 0.0;
    std::vector<double> row(2 * field.cols());
    for (std::size_t k = 0; k < field.rows(); ++k) {
        for (std::size_t c = 0; c < field.cols(); ++c) {
            row[2 * c] = field.at(k, c);
            row[2 * c + 1] = field.right_at(k, c);
        }
        sup = std::max(sup, p_variation(row, p));
    }
    return sup;
}

double p_variation_profile(const Path&, const Partition& partition, double p) {
    return kernels::p_variation_profile(partition, p);
}

double holder_coefficient(const LocalTimeField& field, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("holder_coefficient: alpha must lie in (0, 1)");
    }
    const auto rows = static_cast<std::ptrdiff_t>(field.rows());
    const std::size_t cols = field.cols();
    std::vector<double> scale(cols, 0.0);
    for (std::size_t d = 1; d < cols; ++d) {
        scale[d] = std::pow(static_cast<double>(d) * field.partition.spacing, -alpha);
    }
    double sup = 0.0;
#pragma omp parallel for schedule(static) reduction(max : sup)
    for (std::ptrdiff_t k = 0; k < rows; ++k) {
        for (std::size_t a = 0; a < cols; ++a) {
            const double la = field.at(static_cast<std::size_t>(k), a);
            for (std::size_t b = a + 1; b < cols; ++b) {
                const double lb = field.at(static_cast<std::size_t>(k), b);
                sup = std::max(sup, std::abs(la - lb) * scale[b - a]);
            }
        }
    }
    return sup;
}

std::int64_t count_differing(const Path& path, int level, double u, double t) {
    if (level < 1) throw std::invalid_argument("count_differing: level must be >= 1");
    const double s = std::ldexp(1.0, -level);
    if (!on_grid(u, s)) {
        throw std::invalid_argument("count_differing: u is not a multiple of 2^-n");
    }
    if (t == 0.0) return 0;
    const Partition fine = lebesgue_partition(path, Grid::dyadic(level), t);
    const Partition coarse = lebesgue_partition(path, Grid::dyadic(level - 1), t);
    // Only genuine stopping times; the appended truncation point is not one.
    const std::size_t fine_end = fine.end_is_hit ? fine.size() : fine.size() - 1;
    const std::size_t coarse_end = coarse.end_is_hit ? coarse.size() : coarse.size() - 1;
    std::int64_t count = 0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < fine_end; ++k) {
        const double tau = fine.times[k];
        while (j + 1 < coarse_end && coarse.times[j + 1] <= tau) ++j;
        const bool fine_below = fine.values[k] < u;
        const bool coarse_below = coarse.values[j] < u;
        if (fine_below != coarse_below) ++count;
    }
    return count;
}

TestFunction TestFunction::indicator(double a, double b) {
    TestFunction f;
    char buf[96];
    std::snprintf(buf, sizeof buf, "1[%g,%g]", a, b);
    f.name = buf;
    f.kind = Kind::kIndicator;
    f.a = a;
    f.b = b;
    return f;
}

TestFunction TestFunction::polynomial(std::vector<double> coefficients, double a, double b) {
    TestFunction f;
    f.name = "poly" + std::to_string(coefficients.empty() ? 0 : coefficients.size() - 1);
    f.kind = Kind::kPolynomial;
    f.a = a;
    f.b = b;
    f.coefficients = std::move(coefficients);
    return f;
}

double TestFunction::integrate(const LocalTimeSection& section) const {
    if (kind == Kind::kIndicator) return section.integral(a, b);
    const std::vector<double>& c = coefficients;
    return section.integrate_against(
        [&c](double u) {
            double acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
            return acc;
        },
        a, b);
}

std::vector<TestFunction> default_test_battery(const Path& path, double T) {
    const auto [lo, hi] = path.range(T);
    std::vector<TestFunction> out;
    const auto k_lo = static_cast<std::int64_t>(std::floor(2.0 * lo));
    const auto k_hi = std::max(k_lo + 1, static_cast<std::int64_t>(std::ceil(2.0 * hi)));
    for (std::int64_t k = k_lo; k < k_hi; ++k) {
        out.push_back(TestFunction::indicator(0.5 * static_cast<double>(k),
                                              0.5 * static_cast<double>(k + 1)));
    }
    out.push_back(TestFunction::polynomial({1.0}, lo, hi));
    out.push_back(TestFunction::polynomial({0.0, 1.0}, lo, hi));
    out.push_back(TestFunction::polynomial({0.0, 0.0, 1.0}, lo, hi));
    return out;
}

WeakL2Report weak_l2_check(const Path& path, const std::vector<int>& levels, double T,
                           const std::vector<TestFunction>& test_functions) {
    WeakL2Report report;
    report.levels = levels;
    std::vector<Partition> parts;
    parts.reserve(levels.size());
    for (int n : levels) parts.push_back(lebesgue_partition(path, Grid::dyadic(n), T));
    for (double t : {0.25 * T, 0.5 * T, 0.75 * T, T}) {
        std::vector<LocalTimeSection> sections;
        sections.reserve(parts.size());
        for (const auto& part : parts) sections.push_back(local_time_section(path, part, t));
        for (const auto& fn : test_functions) {
            WeakL2Entry entry;
            entry.function = fn.name;
            entry.t = t;
            for (const auto& section : sections) entry.integrals.push_back(fn.integrate(section));
            for (std::size_t i = 1; i < entry.integrals.size(); ++i) {
                entry.increments.push_back(std::abs(entry.integrals[i] - entry.integrals[i - 1]));
            }
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

void save_field_csv(const LocalTimeField& field, std::ostream& out) {
    out << "t,u,L\n";
    char buf[128];
    for (std::size_t k = 0; k < field.rows(); ++k) {
        for (std::size_t c = 0; c < field.cols(); ++c) {
            const int n = std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n",
                                        field.t_grid()[k], field.u_grid[c], field.at(k, c));
            out.write(buf, n);
        }
    }
}

}  // namespace pathwise
