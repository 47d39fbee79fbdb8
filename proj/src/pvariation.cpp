#include "pathwise/pvariation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pathwise {

namespace {

struct PowerP {
    double p;
    double operator()(double x) const {
        if (p == 2.0) return x * x;
        if (p == 3.0) return x * x * x;
        if (p == 1.0) return x;
        return std::pow(x, p);
    }
};

double dp_p_variation(const std::vector<double>& x, double p) {
    const std::size_t m = x.size();
    if (m < 2) return 0.0;
    if (p == 1.0) {
        double total = 0.0;
        for (std::size_t i = 1; i < m; ++i) total += std::abs(x[i] - x[i - 1]);
        return total;
    }
    const PowerP power{p};
    std::vector<double> prefix_min(m), prefix_max(m), best(m, 0.0);
    prefix_min[0] = prefix_max[0] = x[0];
    for (std::size_t i = 1; i < m; ++i) {
        prefix_min[i] = std::min(prefix_min[i - 1], x[i]);
        prefix_max[i] = std::max(prefix_max[i - 1], x[i]);
    }
    for (std::size_t j = 1; j < m; ++j) {
        double candidate = best[j - 1] + power(std::abs(x[j] - x[j - 1]));
        // best[] and the prefix ranges are non-decreasing in the index, so the
        // scan can stop once the optimistic bound for all earlier i fails.
        for (std::size_t i = j - 1; i-- > 0;) {
            const double reach = std::max(x[j] - prefix_min[i], prefix_max[i] - x[j]);
            if (best[i] + power(reach) <= candidate) break;
            candidate = std::max(candidate, best[i] + power(std::abs(x[j] - x[i])));
        }
        best[j] = candidate;
    }
    return std::pow(best[m - 1], 1.0 / p);
}

}  // namespace

std::vector<double> alternating_extrema(std::span<const double> values) {
    std::vector<double> dedup;
    dedup.reserve(values.size());
    for (double v : values) {
        if (dedup.empty() || dedup.back() != v) dedup.push_back(v);
    }
    if (dedup.size() <= 2) return dedup;
    std::vector<double> out;
    out.reserve(dedup.size());
    out.push_back(dedup.front());
    for (std::size_t i = 1; i + 1 < dedup.size(); ++i) {
        if ((dedup[i] - dedup[i - 1]) * (dedup[i + 1] - dedup[i]) < 0.0) out.push_back(dedup[i]);
    }
    out.push_back(dedup.back());
    return out;
}

PVariationResult p_variation(std::span<const double> values, double p,
                             const PVariationOptions& options) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("p_variation: p must be >= 1, got " + std::to_string(p));
    }
    std::vector<double> extrema = alternating_extrema(values);
    PVariationResult result;
    if (options.coarsen && extrema.size() > options.coarsen_threshold) {
        const std::size_t stride =
            (extrema.size() + options.coarsen_threshold - 1) / options.coarsen_threshold;
        std::vector<double> sub;
        for (std::size_t i = 0; i < extrema.size(); i += stride) sub.push_back(extrema[i]);
        if (sub.back() != extrema.back()) sub.push_back(extrema.back());
        extrema = alternating_extrema(sub);
        result.approximate = true;
    }
    result.value = dp_p_variation(extrema, p);
    return result;
}

double p_variation(std::span<const double> values, double p) {
    return p_variation(values, p, PVariationOptions{}).value;
}

}  // namespace pathwise
