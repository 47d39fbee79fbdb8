#pragma once

#include <span>
#include <vector>

#include "pathwise/partition.hpp"
#include "pathwise/path.hpp"

// Two implementations of the heavy local-time computations. `kernels` holds
// the production versions (OpenMP over u-columns, streaming sweeps over the
// partition); `reference` holds direct evaluations of the defining sums,
// kept for testing the kernels and for benchmarking against them.

namespace pathwise::kernels {

/// Point values and right limits of L^π_{t_k}(u) for every partition point k
/// and every u in `u_grid`, row-major. Parallel over u-columns.
void field_values(std::span<const double> partition_values, std::span<const double> u_grid,
                  std::vector<double>& values, std::vector<double>& right_limits);

/// Streaming sup over fine partition times and fine grid points of
/// |L^coarse - L^fine|. Linear in the number of partition points.
double uniform_distance(const Partition& coarse, const Partition& fine);

/// sup over partition times of the exact p-variation of the u-section.
/// Rows are visited backwards from T and skipped when the Minkowski bound
/// ||L_i|| <= ||L_e|| + 2^{1/p} sum_{i<=j<e} |x_{j+1} - x_j| cannot beat the
/// running maximum, so the result equals the full scan.
double p_variation_profile(const Partition& partition, double p);

/// Rows of the partition visited by the last p_variation_profile call on this
/// thread; a diagnostic for the skip rule.
std::size_t last_profile_rows_evaluated();

}  // namespace pathwise::kernels

namespace pathwise::reference {

void field_values(std::span<const double> partition_values, std::span<const double> u_grid,
                  std::vector<double>& values, std::vector<double>& right_limits);

/// Brute force: both local times evaluated from the defining sum at every
/// fine partition time and fine grid point.
double uniform_distance(const Path& path, const Partition& coarse, const Partition& fine);

/// Every row rebuilt from scratch as an exact section.
double p_variation_profile(const Partition& partition, double p);

}  // namespace pathwise::reference
