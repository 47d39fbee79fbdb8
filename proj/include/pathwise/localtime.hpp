#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pathwise/partition.hpp"
#include "pathwise/path.hpp"
#include "pathwise/section.hpp"

namespace pathwise {

/// L^π_t(u) evaluated directly from its definition as a sum over partition legs.
double discrete_local_time(const Path& path, const Partition& partition, double t, double u);

/// I^π_t(u): the simple-strategy integral of 1{S < u} along the partition.
double tanaka_term(const Path& path, const Partition& partition, double t, double u);

/// L^π_t(u) - [(S_t - u)^- - (S_0 - u)^- + I^π_t(u)]; zero up to rounding.
double tanaka_residual(const Path& path, const Partition& partition, double t, double u);

/// Exact u-section of L^π_t.
LocalTimeSection local_time_section(const Path& path, const Partition& partition, double t);

/// Up- and downcrossing counts of the cells [k c, (k+1) c] by the interpolant.
struct CrossingTally {
    int level = 0;
    double spacing = 1.0;
    std::int64_t k_min = 0;  ///< index of the first cell stored
    std::vector<std::int64_t> up;
    std::vector<std::int64_t> down;

    std::int64_t up_at(std::int64_t k) const;
    std::int64_t down_at(std::int64_t k) const;
    /// max over k of up(k) + down(k).
    std::int64_t max_total() const;
};

CrossingTally crossing_counts(const Path& path, double T, int level);
CrossingTally crossing_counts(const Path& path, double T, const Grid& grid);

/// 2^-n times the number of downcrossings of [u - 2^-n, u] on [0, t].
/// Throws std::invalid_argument when u is not a multiple of 2^-n.
double downcrossing_estimator(const Path& path, int level, double t, double u);

/**
 * Discrete local time L^{π^n}_t(u) sampled at every partition time and at the
 * dyadic points k 2^-n covering [inf S - 2^-n, sup S + 2^-n].
 *
 * `values` holds the point values L(t, u) row-major in (t, u); `right_limits`
 * holds L(t, u+). Together they capture every extremum of a row whenever the
 * row's kinks S_0 and S_t are grid values.
 */
struct LocalTimeField {
    int level = 0;
    double T = 0.0;
    Partition partition;
    std::vector<double> u_grid;
    std::int64_t u_index_min = 0;  ///< u_grid[i] == (u_index_min + i) * spacing
    std::vector<double> values;
    std::vector<double> right_limits;
    std::vector<std::string> warnings;

    const std::vector<double>& t_grid() const noexcept { return partition.times; }
    std::size_t rows() const noexcept { return partition.times.size(); }
    std::size_t cols() const noexcept { return u_grid.size(); }
    double at(std::size_t t_index, std::size_t u_index) const {
        return values[t_index * cols() + u_index];
    }
    double right_at(std::size_t t_index, std::size_t u_index) const {
        return right_limits[t_index * cols() + u_index];
    }
};

LocalTimeField local_time_field(const Path& path, int level, double T);

/// Resolution guard: non-empty when the level under-resolves the path.
std::vector<std::string> resolution_warnings(const Path& path, const Partition& partition,
                                             int level);

/// sup over the finer field's (t, u) grid of |L^coarse - L^fine|, the coarse
/// field being re-evaluated at the finer partition times.
/// Throws std::invalid_argument on mismatched horizons or when `fine` is not finer.
double uniform_distance(const LocalTimeField& coarse, const LocalTimeField& fine);
double uniform_distance(const Partition& coarse, const Partition& fine);

struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<int> distance_levels;  ///< d_n is the distance between levels n-1 and n
    std::vector<double> distances;
    double alpha = 0.0;
    std::optional<double> alpha_hat;  ///< empty when fewer than two distances exceed 1e-12
    double c_alpha = 0.0;             ///< sup_n 2^{n alpha} d_n
    std::optional<double> p;
    std::vector<double> p_var_profile;  ///< one entry per level when p is set
    std::vector<std::string> warnings;
};

/// Throws std::invalid_argument when fewer than three levels are requested.
ConvergenceReport convergence_study(const Path& path, int n_min, int n_max, double T,
                                    double alpha, std::optional<double> p = std::nullopt);

/// sup over rows of the p-variation of the row (point values and right limits).
double p_variation_profile(const LocalTimeField& field, double p);
/// Same quantity from exact sections at every partition time.
double p_variation_profile(const Path& path, const Partition& partition, double p);

/// sup over rows and grid pairs u != v of |L(u) - L(v)| / |u - v|^alpha.
double holder_coefficient(const LocalTimeField& field, double alpha);

/// N^n_t(u): stopping times tau^n_k <= t at which the level-n and level-(n-1)
/// indicator strategies 1{S < u} disagree. u must be a multiple of 2^-n.
std::int64_t count_differing(const Path& path, int level, double u, double t);

/// Test function for the weak-convergence diagnostic: the indicator of [a, b]
/// or a polynomial restricted to [a, b].
struct TestFunction {
    enum class Kind { kIndicator, kPolynomial };
    std::string name;
    Kind kind = Kind::kIndicator;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> coefficients;  ///< c_0 + c_1 u + ... for kPolynomial

    static TestFunction indicator(double a, double b);
    static TestFunction polynomial(std::vector<double> coefficients, double a, double b);
    double integrate(const LocalTimeSection& section) const;
};

/// Indicators of [k/2, (k+1)/2] meeting the path range, and 1, u, u^2 on the range.
std::vector<TestFunction> default_test_battery(const Path& path, double T);

struct WeakL2Entry {
    std::string function;
    double t = 0.0;
    std::vector<double> integrals;   ///< one per level
    std::vector<double> increments;  ///< |integral_n - integral_{n-1}|
};

struct WeakL2Report {
    std::vector<int> levels;
    std::vector<WeakL2Entry> entries;
};

WeakL2Report weak_l2_check(const Path& path, const std::vector<int>& levels, double T,
                           const std::vector<TestFunction>& test_functions);

/// Long-format CSV `t,u,L`.
void save_field_csv(const LocalTimeField& field, std::ostream& out);

}  // namespace pathwise
