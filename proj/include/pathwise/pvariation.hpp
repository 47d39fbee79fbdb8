#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pathwise {

struct PVariationOptions {
    /// Subsample the alternating extrema when there are more than
    /// `coarsen_threshold` of them; the result is then a lower bound.
    bool coarsen = false;
    std::size_t coarsen_threshold = 20000;
};

struct PVariationResult {
    double value = 0.0;
    bool approximate = false;
};

/**
 * p-variation of a function known through its values at breakpoints, for p >= 1:
 * the supremum over subsequences u_0 < ... < u_k of (sum |f(u_i) - f(u_{i-1})|^p)^{1/p}.
 *
 * Exact for step or piecewise-linear functions whose extrema occur at the
 * breakpoints. The sequence is first reduced to its alternating extrema, then
 * a pruned O(m^2) dynamic program runs over the survivors.
 *
 * Throws std::invalid_argument when p < 1.
 */
double p_variation(std::span<const double> values, double p);
PVariationResult p_variation(std::span<const double> values, double p,
                             const PVariationOptions& options);

/// Alternating local extrema (first and last entries always kept).
std::vector<double> alternating_extrema(std::span<const double> values);

}  // namespace pathwise
