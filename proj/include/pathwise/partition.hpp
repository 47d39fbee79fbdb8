#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pathwise/path.hpp"

namespace pathwise {

/// Spatial grid {k * spacing : k in Z}. Dyadic grids carry their level n with
/// spacing 2^-n; generalized grids use an arbitrary positive spacing.
struct Grid {
    double spacing = 1.0;
    std::optional<int> level;

    static Grid dyadic(int level);
    static Grid uniform(double spacing);
};

/**
 * Lebesgue partition of [0, T] generated by successive grid hits of a path.
 *
 * times[0] = 0 and times.back() = truncation_time. values[j] is the path value
 * at times[j]: S(0) for the first point, the exact grid value for every hit,
 * and S(T) for the appended endpoint when T is not itself a hit.
 */
struct Partition {
    std::vector<double> times;
    std::vector<double> values;
    double truncation_time = 0.0;
    double spacing = 1.0;
    bool start_on_grid = false;  ///< S(0) is a grid value
    bool end_is_hit = false;     ///< the last point is a grid hit, not just T

    std::size_t size() const noexcept { return times.size(); }
    /// Number of grid hits (stopping times after tau_0 that are not the truncation point).
    std::size_t hit_count() const noexcept {
        return times.size() - 1 - (end_is_hit ? 0 : 1);
    }
};

Partition lebesgue_partition(const Path& path, const Grid& grid, double T);

/// Largest absolute increment of the path between consecutive partition points.
double mesh_along(const Path& path, const Partition& partition);

/// True iff every time of `coarse` matches a time of `fine` within `tol`.
bool verify_nested(const Partition& coarse, const Partition& fine, double tol = 1e-12);

/// The sequence S(t_j ∧ t) for the partition points, truncated after the first
/// point at or beyond t (later points repeat S(t) and carry no increments).
struct StoppedPath {
    std::vector<double> times;
    std::vector<double> values;
};

StoppedPath stopped_values(const Path& path, const Partition& partition, double t);

/// CSV export with header `k,tau,value`.
void save_partition_csv(const Partition& partition, std::ostream& out);

}  // namespace pathwise
